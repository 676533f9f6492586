import math

import pytest

from orbitsieve import (
    AdmissibleModulus,
    GroupSpec,
    Mat2,
    admissible_moduli,
    bad_modulus,
    bad_primes,
    closure_mod,
    is_admissible,
    is_squarefree,
    orbit_mod_q,
    prime_factors,
    primes_up_to,
    quotient_size,
    reduce_mod,
    sl2_order,
    strong_approx_check,
)


def test_primes_up_to():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(2) == [2]
    assert primes_up_to(1) == []


def test_prime_factors():
    assert prime_factors(1) == []
    assert prime_factors(22) == [2, 11]
    assert prime_factors(360) == [2, 3, 5]


@pytest.mark.parametrize("q,ok", [(1, True), (2, True), (65, True), (4, False), (45, False), (121, False)])
def test_is_squarefree(q, ok):
    assert is_squarefree(q) is ok


def test_reduce_mod():
    g = Mat2(3, 2, 7, 5)
    assert reduce_mod(g, 5) == (3, 2, 2, 0)
    assert reduce_mod(g.inverse(), 5) == (0, 3, 3, 3)


# ----- reduction closures -----


@pytest.mark.parametrize("q,order", [(2, 6), (3, 24), (5, 120), (7, 336), (11, 1320), (13, 2184)])
def test_sl2_order_formula(q, order):
    assert sl2_order(q) == order


def test_sl2_order_multiplicative():
    assert sl2_order(65) == sl2_order(5) * sl2_order(13)


@pytest.mark.parametrize("p", [3, 5, 7, 13])
def test_closure_fills_sl2_at_good_primes(group, p):
    assert len(closure_mod(group, p)) == sl2_order(p)


def test_closure_detects_thin_reduction_at_11(group):
    # reduction mod 11 stays inside a proper subgroup of index 12
    assert len(closure_mod(group, 11)) == 110


def test_strong_approx_result_fields(group):
    r11 = strong_approx_check(group, 11)
    assert not r11.surjective
    assert (r11.order_reached, r11.full_order) == (110, 1320)
    r5 = strong_approx_check(group, 5)
    assert r5.surjective
    assert (r5.order_reached, r5.full_order) == (120, 120)
    assert r5.as_dict() == {
        "prime": 5,
        "surjective": True,
        "order_reached": 120,
        "full_order": 120,
    }


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_strong_approx_exact_order_agrees(group, p):
    fast = strong_approx_check(group, p)
    slow = strong_approx_check(group, p, exact_order=True)
    assert fast.surjective == slow.surjective
    assert fast.order_reached == slow.order_reached


def test_bad_primes_and_modulus(group):
    assert bad_primes(group) == (2, 11)
    assert bad_modulus(group) == 22


def test_bad_modulus_found_by_scan():
    spec = GroupSpec(generators=(Mat2(2, 1, 3, 2), Mat2(3, 2, 7, 5)))
    assert spec.bad_modulus is None
    assert bad_modulus(spec) == 22


# ----- admissible moduli -----


@pytest.mark.parametrize("q", [1, 5, 13, 17, 65, 85])
def test_admissible_accepts(q):
    assert is_admissible(q, 22)
    AdmissibleModulus.of(q, 22)


@pytest.mark.parametrize("q", [2, 3, 7, 10, 11, 15, 25, 33, 121])
def test_admissible_rejects(q):
    assert not is_admissible(q, 22)
    with pytest.raises(ValueError):
        AdmissibleModulus.of(q, 22)


def test_admissible_requires_even_bad_modulus():
    with pytest.raises(ValueError):
        is_admissible(5, 11)


def test_admissible_moduli_frozen_prefix():
    assert admissible_moduli(100, 22) == [1, 5, 13, 17, 29, 37, 41, 53, 61, 65, 73, 85, 89, 97]


def test_admissible_modulus_carries_factorization():
    m = AdmissibleModulus.of(65, 22)
    assert m.primes == (5, 13)
    assert m.bad_mod == 22


@pytest.mark.parametrize("q,size", [(1, 1), (5, 24), (13, 168), (65, 4032)])
def test_quotient_size(q, size):
    assert quotient_size(q) == size


# ----- base point orbits -----


@pytest.mark.parametrize("q,size", [(5, 24), (13, 168), (65, 4032)])
def test_orbit_covers_primitive_pairs(group, q, size):
    orbit = orbit_mod_q(group, q)
    assert len(orbit) == size == quotient_size(q)
    assert (0, 1 % q) in orbit
    assert all(math.gcd(c, d, q) == 1 for c, d in orbit)
