"""Local densities and complete exponential sums over Z/q.

Everything here is exact.  Densities are Fractions; exponential sums go
through exact cyclotomic arithmetic (or integer-weight class counts on the
numpy fast paths), so each asserted identity is an integer statement and no
comparison ever involves a float tolerance.

Conventions.  Forms are the binary quadratics attached to group elements,
f(c, d) = A c^2 + 2B cd + C d^2 with AC - B^2 = 1; e_q(x) = e(x/q).  The
proxy density is rho_bar(p) = (2p-1)/p^2, the recentred indicator is
Xi(p; n) = 1_{p | n} - rho_bar(p), and both extend multiplicatively to
squarefree moduli.  The sum names follow a fixed scheme:

  s1(q; f)                 = q^-2 sum_{c,d (q)} Xi(q; f(c,d))
  s2(q; f, f')             = q^-2 sum Xi(q; f) Xi(q; f')
  s4(q; k,l; f)            = q^-2 sum Xi(q; f) e_q(-ck - dl)
  s5(q; k,l; f, f')        = q^-2 sum Xi(q; f) Xi(q; f') e_q(-ck - dl)
  s3(q, q'; k,l; f, f')    = qbar^-2 sum_{c,d (qbar)} Xi(q; f) Xi(q'; f')
                             e_qbar(-ck - dl),   qbar = lcm(q, q')

s1 vanishes identically for admissible q > 1 (the point of recentring),
s4 has a three-case closed form at primes p = 1 mod 4, |s5| <= 4/p at odd
primes, and s3 factors exactly as s4(q1) s4(q1') s5(qtilde) with
qtilde = gcd(q, q'), q1 = q/qtilde, q1' = q'/qtilde.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .algebra import QForm, qform_eval
from .congruence import is_squarefree, prime_factors
from .cyclotomic import ComplexExact
from .errors import BudgetExceededError

# Densities and sums land in Q; the alias marks signatures that promise
# exact rationals rather than floats.
LocalRational = Fraction

BRUTE_CAP = 10**7  # max grid points per brute-force sum


def _squarefree_factors(q: int) -> list[int]:
    if q < 1:
        raise ValueError("q must be positive")
    if not is_squarefree(q):
        raise ValueError(f"{q} is not squarefree")
    return prime_factors(q)


# ----- densities -----


def rho_bar(q: int) -> LocalRational:
    """Multiplicative proxy density, rho_bar(p) = (2p-1)/p^2; rho_bar(1) = 1."""
    out = Fraction(1)
    for p in _squarefree_factors(q):
        out *= Fraction(2 * p - 1, p * p)
    return out


def xi(q: int, n: int) -> LocalRational:
    """Recentred divisibility indicator, multiplicative over p | q."""
    out = Fraction(1)
    for p in _squarefree_factors(q):
        out *= Fraction(p * p - (2 * p - 1) if n % p == 0 else -(2 * p - 1), p * p)
    return out


def _xi_scaled(q: int, primes: Sequence[int], n: int) -> int:
    """q^2 * Xi(q; n) as an integer, given q's prime factors."""
    out = 1
    for p in primes:
        out *= (p - 1) * (p - 1) if n % p == 0 else -(2 * p - 1)
    return out


def beta(q: int, *, bad_mod: int = 2) -> LocalRational:
    """Local orbit density: product of 2/(p+1) over p | q, or 0 if any prime
    factor is 3 mod 4 or divides the bad modulus."""
    out = Fraction(1)
    for p in _squarefree_factors(q):
        if p % 4 != 1 or bad_mod % p == 0:
            return Fraction(0)
        out *= Fraction(2, p + 1)
    return out


def _check_prime_1mod4(p: int) -> None:
    if p < 5 or p % 4 != 1 or prime_factors(p) != [p]:
        raise ValueError(f"p = {p} is not a prime congruent to 1 mod 4")


def rho1_closed(p: int) -> LocalRational:
    """-(p-1)/((2p-1)(p+1)), the orbit-average correction at p = 1 mod 4."""
    _check_prime_1mod4(p)
    return Fraction(-(p - 1), (2 * p - 1) * (p + 1))


def rho1_bruteforce(p: int) -> LocalRational:
    """Defining sum for rho1: the Xi-average of c^2 + d^2 over the p^2 - 1
    primitive pairs mod p, normalized by rho_bar(p)."""
    _check_prime_1mod4(p)
    c = np.arange(p, dtype=np.int64)
    sq = (c * c) % p
    zeros = int(np.count_nonzero((sq[:, None] + sq[None, :]) % p == 0)) - 1
    total = Fraction(
        zeros * (p - 1) ** 2 - (p * p - 1 - zeros) * (2 * p - 1), p * p
    )
    return total / (rho_bar(p) * (p * p - 1))


def rho1(q: int) -> LocalRational:
    """Multiplicative extension of rho1 to squarefree admissible q."""
    out = Fraction(1)
    for p in _squarefree_factors(q):
        out *= rho1_closed(p)
    return out


# ----- grid machinery -----


def _form_grid_mod(form: QForm, q: int) -> np.ndarray:
    """f(c, d) mod q on the full q x q grid, row index c, column index d."""
    if q * q > BRUTE_CAP:
        raise BudgetExceededError(f"grid {q}^2 exceeds cap {BRUTE_CAP}")
    c = np.arange(q, dtype=np.int64)
    sq = (c * c) % q
    grid = (2 * (form.B % q)) * np.multiply.outer(c, c)
    grid += ((form.A % q) * sq)[:, None]
    grid += ((form.C % q) * sq)[None, :]
    grid %= q
    return grid


def _combo_counts(masks: Sequence[np.ndarray]) -> list[int]:
    """Counts of each of the 2^len(masks) boolean combinations."""
    code = np.zeros(masks[0].shape, dtype=np.int64)
    for i, m in enumerate(masks):
        code += m.astype(np.int64) << i
    return np.bincount(code.ravel(), minlength=1 << len(masks)).tolist()


def _xi_weight(primes: Sequence[int], bits: int) -> Fraction:
    """Product over primes of (1 - rho_bar) or (-rho_bar) per combination bit."""
    out = Fraction(1)
    for i, p in enumerate(primes):
        hit = bits >> i & 1
        out *= Fraction((p - 1) ** 2 if hit else -(2 * p - 1), p * p)
    return out


# ----- the sums -----


def s1(q: int, form: QForm) -> LocalRational:
    """Full Xi-sum over the grid; vanishes exactly for admissible q > 1."""
    return s1_many(q, [form])[0]


def s1_many(q: int, forms: Sequence[QForm]) -> list[LocalRational]:
    """s1 for several forms at one modulus, sharing the grid setup."""
    primes = _squarefree_factors(q)
    if q == 1:
        return [Fraction(1)] * len(forms)
    if q * q > BRUTE_CAP:
        raise BudgetExceededError(f"grid {q}^2 exceeds cap {BRUTE_CAP}")
    c = np.arange(q, dtype=np.int64)
    sq = (c * c) % q
    outer = np.multiply.outer(c, c)
    out = []
    for form in forms:
        grid = (2 * (form.B % q)) * outer
        grid += ((form.A % q) * sq)[:, None]
        grid += ((form.C % q) * sq)[None, :]
        grid %= q
        counts = _combo_counts(
            [grid == 0 if p == q else grid % p == 0 for p in primes]
        )
        total = sum(
            n * _xi_weight(primes, bits) for bits, n in enumerate(counts) if n
        )
        out.append(Fraction(total) / (q * q))
    return out


def s2(q: int, form: QForm, form2: QForm) -> LocalRational:
    """Two-form Xi-correlation at zero frequency."""
    primes = _squarefree_factors(q)
    if q == 1:
        return Fraction(1)
    r = len(primes)
    grid, grid2 = _form_grid_mod(form, q), _form_grid_mod(form2, q)
    masks = [grid % p == 0 for p in primes] + [grid2 % p == 0 for p in primes]
    counts = _combo_counts(masks)
    total = Fraction(0)
    for bits, n in enumerate(counts):
        if n:
            total += n * _xi_weight(primes, bits) * _xi_weight(primes, bits >> r)
    return total / (q * q)


def joint_primitive_zeros(p: int, form: QForm, form2: QForm) -> int:
    """Number of (c, d) != (0, 0) mod p where both forms vanish."""
    grid, grid2 = _form_grid_mod(form, p), _form_grid_mod(form2, p)
    return int(np.count_nonzero((grid == 0) & (grid2 == 0))) - 1


def s2_bound_holds(p: int, form: QForm, form2: QForm) -> bool:
    """|s2| <= (joint primitive zeros)/p^2 + 1/p^2 + rho_bar(p)^2, exactly."""
    lhs = abs(s2(p, form, form2))
    rhs = Fraction(joint_primitive_zeros(p, form, form2) + 1, p * p) + rho_bar(p) ** 2
    return lhs <= rhs


def _exp_sum_value(q: int, scaled: list[int], scale: int) -> Fraction:
    """Value of (1/scale) * sum_t scaled[t] e_q(t), asserting rationality."""
    acc = ComplexExact(q, scaled)
    return acc.rational_value() / scale


def s4_bruteforce(q: int, k: int, l: int, form: QForm) -> LocalRational:
    """One-form twisted sum, evaluated exactly over the cyclotomic field.

    Accepts any squarefree q within budget; the value is always rational
    because the zero locus of the form is a union of lines.
    """
    primes = _squarefree_factors(q)
    if q * q > BRUTE_CAP:
        raise BudgetExceededError(f"grid {q}^2 exceeds cap {BRUTE_CAP}")
    weights = [0] * q
    for c in range(q):
        for d in range(q):
            w = _xi_scaled(q, primes, qform_eval(form, c, d))
            weights[(-c * k - d * l) % q] += w
    return _exp_sum_value(q, weights, q**4)


def s4_closed(p: int, k: int, l: int, form: QForm) -> LocalRational:
    """Three-case evaluation at a prime p = 1 mod 4.

    0 when p | (k, l); (p-1)/p^2 when the adjugate form vanishes at the
    frequency, i.e. p | f(l, -k); else -1/p^2.  (For p = 3 mod 4 the zero
    locus degenerates to the origin and this shape is wrong, so such p are
    rejected rather than silently mis-evaluated.)
    """
    _check_prime_1mod4(p)
    if k % p == 0 and l % p == 0:
        return Fraction(0)
    adj = form.A * l * l - 2 * form.B * l * k + form.C * k * k
    if adj % p == 0:
        return Fraction(p - 1, p * p)
    return Fraction(-1, p * p)


def s4_grid_check(p: int, forms: Sequence[QForm]) -> bool:
    """Brute force equals closed form for every (k, l) mod p and every form.

    The scaled integer weights stay below p^2 and their per-class sums below
    p^4 < 2^53, so the float accumulation inside bincount is exact.
    """
    _check_prime_1mod4(p)
    idx = np.arange(p, dtype=np.int64)
    for form in forms:
        zero = _form_grid_mod(form, p) == 0
        xi_flat = np.where(zero, (p - 1) ** 2, -(2 * p - 1)).astype(np.float64).ravel()
        a_, b_, c_ = form.A % p, form.B % p, form.C % p
        for k in range(p):
            tk = (-k * idx) % p
            for l in range(p):
                t = (tk[:, None] + ((-l * idx) % p)[None, :]) % p
                v = np.rint(
                    np.bincount(t.ravel(), weights=xi_flat, minlength=p)
                ).astype(np.int64)
                if not np.all(v[1:] == v[1]):
                    return False  # irrational value: identity cannot hold
                brute_scaled = int(v[0] - v[1])
                if k == 0 and l == 0:
                    closed_scaled = 0
                elif (a_ * l * l - 2 * b_ * l * k + c_ * k * k) % p == 0:
                    closed_scaled = (p - 1) * p * p
                else:
                    closed_scaled = -p * p
                if brute_scaled != closed_scaled:
                    return False
    return True


def s5_bruteforce(q: int, k: int, l: int, form: QForm, form2: QForm) -> LocalRational:
    """Two-form twisted sum; |value| <= 4/p at odd primes p."""
    primes = _squarefree_factors(q)
    if q * q > BRUTE_CAP:
        raise BudgetExceededError(f"grid {q}^2 exceeds cap {BRUTE_CAP}")
    weights = [0] * q
    for c in range(q):
        for d in range(q):
            w = _xi_scaled(q, primes, qform_eval(form, c, d)) * _xi_scaled(
                q, primes, qform_eval(form2, c, d)
            )
            weights[(-c * k - d * l) % q] += w
    return _exp_sum_value(q, weights, q**6)


def s3_direct(
    q: int, qp: int, k: int, l: int, form: QForm, form2: QForm
) -> LocalRational:
    """The mixed-moduli sum over Z/lcm(q, q'), exactly."""
    primes, primes2 = _squarefree_factors(q), _squarefree_factors(qp)
    qbar = math.lcm(q, qp)
    if qbar * qbar > BRUTE_CAP:
        raise BudgetExceededError(f"grid {qbar}^2 exceeds cap {BRUTE_CAP}")
    weights = [0] * qbar
    for c in range(qbar):
        for d in range(qbar):
            w = _xi_scaled(q, primes, qform_eval(form, c, d)) * _xi_scaled(
                qp, primes2, qform_eval(form2, c, d)
            )
            weights[(-c * k - d * l) % qbar] += w
    return _exp_sum_value(qbar, weights, qbar * qbar * q * q * qp * qp)


def s3_factorization_check(
    q: int, qp: int, k: int, l: int, form: QForm, form2: QForm
) -> bool:
    """Does s3(q, q') equal s4(q1) * s4(q1') * s5(qtilde) exactly?

    qtilde = gcd(q, q'), q1 = q/qtilde, q1' = q'/qtilde.  The same (k, l)
    feeds all three factors: the unit twists introduced by splitting
    e_qbar across coprime parts scale (k, l) by units, and each factor is
    invariant under that scaling.
    """
    qt = math.gcd(q, qp)
    lhs = s3_direct(q, qp, k, l, form, form2)
    rhs = (
        s4_bruteforce(q // qt, k, l, form)
        * s4_bruteforce(qp // qt, k, l, form2)
        * s5_bruteforce(qt, k, l, form, form2)
    )
    return lhs == rhs


# ----- dispersion identity -----


def dispersion_expand(q: int, n: int) -> LocalRational:
    """Right side of the indicator expansion: sum over d | q of
    Xi(d; n) rho_bar(q/d); equals 1 if q | n, else 0."""
    primes = _squarefree_factors(q)
    total = Fraction(0)
    for r in range(len(primes) + 1):
        for sub in combinations(primes, r):
            d = math.prod(sub)
            total += xi(d, n) * rho_bar(q // d)
    return total


def dispersion_identity_holds(q_max: int, n_max: int) -> bool:
    """Exhaustive check of the expansion against 1_{q | n} for all squarefree
    q <= q_max and all 1 <= n <= n_max.

    For fixed q the right side depends on n only through which p | q divide
    n, so each divisibility pattern is verified once, exactly, and numpy
    maps every n onto its pattern to cover the whole rectangle.
    """
    ns = np.arange(1, n_max + 1, dtype=np.int64)
    for q in range(1, q_max + 1):
        if not is_squarefree(q):
            continue
        primes = prime_factors(q)
        full = (1 << len(primes)) - 1
        for bits in range(full + 1):
            n0 = math.prod(p for i, p in enumerate(primes) if bits >> i & 1)
            want = Fraction(1) if bits == full else Fraction(0)
            if dispersion_expand(q, n0) != want:
                return False
        code = np.zeros_like(ns)
        for i, p in enumerate(primes):
            code += (ns % p == 0).astype(np.int64) << i
        if not np.array_equal(code == full, ns % q == 0):
            return False  # pattern map and indicator disagree (cannot happen)
    return True
