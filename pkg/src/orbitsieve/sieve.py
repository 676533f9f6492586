"""Sieve sequence over hypotenuses, congruence masses, and parameter checks.

The sequence weights a_T(n) count pairs (gamma, omega) with gamma in a norm-X
ball, omega in the product multiset of two nested balls, and the form of
omega evaluating to n at gamma's bottom row; equivalently, n is the
hypotenuse attached to gamma*omega.  Everything is a sharp cutoff, so the
total mass is exactly N(X) * N(Y1) * N(Y2) and every congruence ledger line
|A_q| = beta(q) * mass + r(q) is an identity of rationals, not an estimate.

The report's fitted exponent alpha_hat answers: up to which modulus power
N^alpha does the accumulated remainder stay below mass^(1 - eps_report)?
It is a desk-scale diagnostic, not an asymptotic claim, and is labeled as
such in the report metadata.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .algebra import qform_eval, qform_of
from .congruence import admissible_moduli, bad_modulus as scan_bad_modulus
from .localsums import beta, xi
from .orbits import GroupSpec, ProductBallSpec, enumerate_ball, product_ball

# ----- sequence construction -----


@dataclass(frozen=True)
class SieveSequence:
    """Weighted hypotenuse sequence with its cutoff parameters."""

    x: float
    y1: float
    y2: float
    weights: dict[int, int]
    bad_mod: int
    label: str = "sieve"

    @property
    def t(self) -> float:
        """Combined cutoff T = X * Y1 * Y2."""
        return self.x * self.y1 * self.y2

    @property
    def n_support(self) -> int:
        """Support bound: every weighted n satisfies n <= floor(T^2)."""
        return int(self.t * self.t)

    @property
    def mass(self) -> int:
        return sum(self.weights.values())


def build_sequence(
    spec: GroupSpec, x: float, y1: float, y2: float, *, cap: int | None = None
) -> SieveSequence:
    """Assemble the weight map by the double sum over the gamma and omega balls."""
    if not (x >= y1 >= y2) or y2 * y2 < 2:
        raise ValueError("need X >= Y1 >= Y2 >= sqrt(2)")
    omega = product_ball(spec, ProductBallSpec.from_pair(y1, y2), cap=cap)
    ball = enumerate_ball(spec, x, cap=cap)
    weights: dict[int, int] = {}
    for w, mult in sorted(omega.items(), key=lambda kv: kv[0].entries()):
        form = qform_of(w)
        for g in ball.elements:
            n = qform_eval(form, g.c, g.d)
            weights[n] = weights.get(n, 0) + mult
    bad = spec.bad_modulus if spec.bad_modulus is not None else scan_bad_modulus(spec)
    return SieveSequence(
        x=float(x), y1=float(y1), y2=float(y2), weights=weights, bad_mod=bad,
        label=spec.label,
    )


def mass_mod(seq: SieveSequence, q: int) -> int:
    """Weighted count of multiples of q; accepts inadmissible q so callers
    can verify the mass actually vanishes there."""
    if q < 1:
        raise ValueError("q must be positive")
    return sum(a for n, a in seq.weights.items() if n % q == 0)


def recentred_mass(seq: SieveSequence, d: int) -> Fraction:
    """Sum of a(n) * Xi(d; n): the building block of the divisibility ledger.

    Summing rho_bar(q/d) * recentred_mass(d) over d | q recovers mass_mod(q)
    exactly, which is the expansion the error analysis rests on.
    """
    return sum((a * xi(d, n) for n, a in seq.weights.items()), Fraction(0))


# ----- congruence report -----


@dataclass(frozen=True)
class SieveRow:
    q: int
    mass: int
    main: Fraction  # beta(q) * total mass
    remainder: Fraction

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "mass": self.mass,
            "main_term": float(self.main),
            "remainder": float(self.remainder),
        }


@dataclass(frozen=True)
class SieveReport:
    rows: tuple[SieveRow, ...]
    q0: int
    q_max: int
    total_mass: int
    n_support: int
    error_sum: Fraction
    alpha_hat: float
    eps_report: float
    caveat: str = "desk-scale, not asymptotic"


def _alpha_hat(
    rows: Sequence[SieveRow], total_mass: int, n_support: int, q_max: int,
    eps_report: float,
) -> float:
    """Largest alpha with error_sum(N^alpha) <= mass^(1 - eps_report).

    The accumulated |r| is nondecreasing in the modulus threshold, so the
    answer is located by bisection on the prefix sums; the certified range
    never extends past q_max, the largest threshold actually examined.
    """
    if n_support < 2 or total_mass < 1:
        return 0.0
    target = total_mass ** (1.0 - eps_report)
    prefix: list[Fraction] = []
    run = Fraction(0)
    for row in rows:
        run += abs(row.remainder)
        prefix.append(run)
    idx = bisect_right(prefix, target)
    if idx == len(rows):
        q_star = q_max
    else:
        q_star = rows[idx].q
    if q_star < 2:
        return 0.0
    return math.log(q_star) / math.log(n_support)


def sieve_report(
    seq: SieveSequence, q0: int, q_max: int, *, eps_report: float = 0.1
) -> SieveReport:
    """Ledger of congruence masses against main terms for admissible moduli.

    Rows cover admissible q with q0 <= q < q_max; the error sum and the
    fitted exponent always accumulate from the smallest admissible modulus,
    so q0 only trims the displayed rows.
    """
    if not (1 <= q0 <= q_max):
        raise ValueError("need 1 <= Q0 <= Q")
    if q_max >= seq.x:
        raise ValueError("modulus threshold must stay below the ball cutoff X")
    total = seq.mass
    all_rows = []
    for q in admissible_moduli(q_max - 1, seq.bad_mod):
        m = mass_mod(seq, q)
        main = beta(q, bad_mod=seq.bad_mod) * total
        all_rows.append(SieveRow(q=q, mass=m, main=main, remainder=m - main))
    err = sum((abs(r.remainder) for r in all_rows), Fraction(0))
    ah = _alpha_hat(all_rows, total, seq.n_support, q_max, eps_report)
    return SieveReport(
        rows=tuple(r for r in all_rows if r.q >= q0),
        q0=q0,
        q_max=q_max,
        total_mass=total,
        n_support=seq.n_support,
        error_sum=err,
        alpha_hat=ah,
        eps_report=eps_report,
    )


def report_to_csv(report: SieveReport, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["q", "mass", "main_term", "remainder"])
        for row in report.rows:
            w.writerow([row.q, row.mass, repr(float(row.main)), repr(float(row.remainder))])


# ----- parameter feasibility -----


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class ExponentParams:
    """Derived exponents and the five-inequality system they must satisfy."""

    delta: float
    theta: float
    eps: float
    eta: float
    alpha: float
    alpha0: float
    x: float
    y: float
    c_big: float
    checks: tuple[InequalityCheck, ...] = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return all(c.holds for c in self.checks)


def feasibility_check(
    delta: float, theta: float, eps: float, *, eta: float = 1e-13, c_pow: int = 7
) -> ExponentParams:
    """Evaluate the exponent system at the standard assignments.

    alpha = 7/24 - eps, alpha0 = 1/100, y = eps/2, x = 1 - y, and the large
    constant C = 10^c_pow / (delta - theta).  Infeasibility (in particular
    whenever theta >= delta, which kills the spectral-margin inequality) is
    reported in the result, never raised.
    """
    if not (0.5 < delta < 1 and 0.5 < theta < 1):
        raise ValueError("delta and theta must lie in (1/2, 1)")
    if not 0 < eps < 7 / 24:
        raise ValueError("eps must lie in (0, 7/24)")
    alpha = 7 / 24 - eps
    alpha0 = 1 / 100
    y = eps / 2
    x = 1 - y
    gap = delta - theta
    if gap != 0:
        c_big = 10.0**c_pow / gap
        floor5 = 3 * alpha * eta * (c_big + 1) / gap
    else:
        c_big = math.inf
        floor5 = math.inf
    checks = (
        InequalityCheck("alpha0_vs_gap", 6 * alpha0, 2 * gap * x, 6 * alpha0 < 2 * gap * x),
        InequalityCheck("alpha0_positive", 0.0, alpha0, alpha0 > 0),
        InequalityCheck("delta_near_one", (1 - delta) * x, alpha0 * eta, (1 - delta) * x < alpha0 * eta),
        InequalityCheck(
            "alpha_capacity", 2 * y + 12 * alpha, (delta + 2.5) * x,
            2 * y + 12 * alpha < (delta + 2.5) * x,
        ),
        InequalityCheck("y_floor", y, floor5, y > floor5),
    )
    return ExponentParams(
        delta=delta, theta=theta, eps=eps, eta=eta, alpha=alpha, alpha0=alpha0,
        x=x, y=y, c_big=c_big, checks=checks,
    )


GREAVES_R4_THRESHOLD = 1 / (4 - 0.103974)


def greaves_threshold(alpha: float) -> int | None:
    """Almost-prime order supported by a distribution exponent alpha.

    Returns 4 when alpha clears the weighted-sieve threshold
    1/(4 - 0.103974), strictly; other orders are out of scope, so anything
    below the threshold yields None.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return 4 if alpha > GREAVES_R4_THRESHOLD else None
