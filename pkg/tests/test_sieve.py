import math
from fractions import Fraction

import pytest

from orbitsieve import (
    GREAVES_R4_THRESHOLD,
    beta,
    build_sequence,
    feasibility_check,
    greaves_threshold,
    mass_mod,
    recentred_mass,
    report_to_csv,
    rho_bar,
    sieve_report,
)


@pytest.fixture(scope="module")
def seq(group):
    return build_sequence(group, 100.0, 1.5, 1.5)


# ----- sequence construction -----


def test_sequence_parameters(seq):
    assert seq.t == 225.0
    assert seq.n_support == 50625
    assert seq.bad_mod == 22
    assert seq.mass == 407  # N(100) * N(1.5)^2


def test_weights_are_positive_and_supported(seq):
    assert all(isinstance(a, int) and a > 0 for a in seq.weights.values())
    assert all(1 <= n <= seq.n_support for n in seq.weights)
    assert seq.weights[1] >= 1  # the identity contributes hypotenuse 1


def test_build_sequence_validation(group):
    with pytest.raises(ValueError):
        build_sequence(group, 1.0, 1.5, 1.5)  # X below Y1
    with pytest.raises(ValueError):
        build_sequence(group, 10.0, 1.2, 1.2)  # Y2 below sqrt(2)
    with pytest.raises(ValueError):
        build_sequence(group, 10.0, 1.5, 2.0)  # Y1 below Y2


@pytest.mark.parametrize(
    "q,m", [(5, 138), (13, 68), (65, 26), (3, 0), (11, 0), (2, 124)]
)
def test_congruence_masses_frozen(seq, q, m):
    assert mass_mod(seq, q) == m


def test_mass_mod_validation(seq):
    with pytest.raises(ValueError):
        mass_mod(seq, 0)


# ----- divisibility ledger -----


def test_recentred_mass_prime(seq):
    assert recentred_mass(seq, 5) == Fraction(-213, 25)
    assert recentred_mass(seq, 5) == mass_mod(seq, 5) - rho_bar(5) * seq.mass


def test_recentred_mass_inclusion_exclusion(seq):
    m, m5, m13, m65 = seq.mass, mass_mod(seq, 5), mass_mod(seq, 13), mass_mod(seq, 65)
    want = m65 - rho_bar(13) * m5 - rho_bar(5) * m13 + rho_bar(5) * rho_bar(13) * m
    assert recentred_mass(seq, 65) == want


def test_divisor_expansion_recovers_mass(seq):
    """Summing rho_bar(q/d) * recentred(d) over d | q gives the exact mass."""
    for q in (5, 13, 65):
        total = sum(
            rho_bar(q // d) * recentred_mass(seq, d)
            for d in (1, 5, 13, 65)
            if q % d == 0
        )
        assert total == mass_mod(seq, q)


# ----- report -----


def test_report_rows_frozen(seq):
    rep = sieve_report(seq, 1, 30)
    rows = [(r.q, r.mass, r.main, r.remainder) for r in rep.rows]
    assert rows == [
        (1, 407, Fraction(407), Fraction(0)),
        (5, 138, Fraction(407, 3), Fraction(7, 3)),
        (13, 68, Fraction(407, 7), Fraction(69, 7)),
        (17, 42, Fraction(407, 9), Fraction(-29, 9)),
        (29, 29, Fraction(407, 15), Fraction(28, 15)),
    ]
    assert rep.error_sum == Fraction(5443, 315)
    assert abs(rep.alpha_hat - 0.31398950620245386) < 1e-12
    assert rep.caveat == "desk-scale, not asymptotic"
    assert rep.total_mass == 407


def test_report_rows_satisfy_ledger(seq):
    rep = sieve_report(seq, 1, 30)
    for row in rep.rows:
        assert row.main == beta(row.q, bad_mod=seq.bad_mod) * seq.mass
        assert row.main + row.remainder == row.mass


def test_report_row_window(seq):
    rep = sieve_report(seq, 13, 30)
    assert [r.q for r in rep.rows] == [13, 17, 29]
    # the error sum covers the whole range regardless of the display window
    assert rep.error_sum == sieve_report(seq, 1, 30).error_sum


def test_report_validation(seq):
    with pytest.raises(ValueError):
        sieve_report(seq, 0, 30)
    with pytest.raises(ValueError):
        sieve_report(seq, 30, 13)
    with pytest.raises(ValueError):
        sieve_report(seq, 1, 500)  # modulus range past X


def test_alpha_hat_range(seq):
    rep = sieve_report(seq, 1, 30, eps_report=0.1)
    assert 0.0 <= rep.alpha_hat < 1.0


def test_report_to_csv_golden(tmp_path, seq):
    path = tmp_path / "rows.csv"
    report_to_csv(sieve_report(seq, 1, 30), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "q,mass,main_term,remainder"
    assert lines[1] == "1,407,407.0,0.0"
    assert len(lines) == 6


# ----- parameter feasibility -----


def test_feasibility_reference_point():
    params = feasibility_check(1 - 1e-15, 5 / 6, 3 / 100)
    assert params.feasible
    assert params.alpha == pytest.approx(7 / 24 - 3 / 100)
    assert params.alpha0 == 0.01
    assert params.x + params.y == pytest.approx(1.0)
    assert [c.name for c in params.checks] == [
        "alpha0_vs_gap",
        "alpha0_positive",
        "delta_near_one",
        "alpha_capacity",
        "y_floor",
    ]
    assert all(c.holds for c in params.checks)


def test_feasibility_fails_without_spectral_gap():
    params = feasibility_check(0.9, 0.9, 3 / 100)
    assert not params.feasible
    assert math.isinf(params.c_big)
    failed = {c.name for c in params.checks if not c.holds}
    assert "alpha0_vs_gap" in failed


def test_feasibility_fails_when_theta_exceeds_delta():
    params = feasibility_check(0.9, 0.95, 3 / 100)
    assert not params.feasible


def test_feasibility_validation():
    with pytest.raises(ValueError):
        feasibility_check(0.4, 0.8, 0.03)
    with pytest.raises(ValueError):
        feasibility_check(0.9, 0.3, 0.03)
    with pytest.raises(ValueError):
        feasibility_check(0.9, 0.8, 0.0)
    with pytest.raises(ValueError):
        feasibility_check(0.9, 0.8, 0.3)  # eps at or past 7/24


def test_greaves_threshold_rule():
    assert GREAVES_R4_THRESHOLD == 1 / (4 - 0.103974)
    assert greaves_threshold(0.25) is None
    assert greaves_threshold(GREAVES_R4_THRESHOLD) is None  # strict inequality
    assert greaves_threshold(GREAVES_R4_THRESHOLD + 1e-9) == 4
    assert greaves_threshold(7 / 24 - 0.03) == 4


def test_greaves_threshold_domain():
    with pytest.raises(ValueError):
        greaves_threshold(0.0)
    with pytest.raises(ValueError):
        greaves_threshold(1.0)
    with pytest.raises(ValueError):
        greaves_threshold(-0.1)
