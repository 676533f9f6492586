"""Certified factorization and almost-prime classification of hypotenuses.

factor() runs trial division by primes up to 10^6, then splits any remaining
cofactor with Brent's cycle method, certifying primality of every reported
factor and multiplying the result back together before returning.  The
Miller-Rabin base set is a proven witness set for n < 3317044064679887385961981
(about 3.3e24); between there and the 2^128 input cap the test adds sixteen
per-n deterministic bases and is probabilistic in principle, though nothing
at desk scale comes near that window.  Rho parameters are drawn from a
per-n seeded generator, so results are reproducible call to call.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .algebra import Triple, triple_of
from .orbits import BallResult

TRIAL_LIMIT = 10**6
INPUT_BITS = 128

# proven deterministic witness set below ~3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_PROVEN_LIMIT = 3_317_044_064_679_887_385_961_981


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    mark = bytearray([1]) * (TRIAL_LIMIT + 1)
    mark[0] = mark[1] = 0
    for p in range(2, int(TRIAL_LIMIT**0.5) + 1):
        if mark[p]:
            mark[p * p :: p] = bytearray(len(mark[p * p :: p]))
    return tuple(i for i in range(2, TRIAL_LIMIT + 1) if mark[i])


def is_prime(n: int) -> bool:
    """Miller-Rabin with the proven base set (deterministic below ~3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = list(_MR_BASES)
    if n >= _MR_PROVEN_LIMIT:
        rng = random.Random(n)
        bases += [rng.randrange(2, n - 1) for _ in range(16)]
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_split(n: int, rng: random.Random) -> int:
    """A nontrivial factor of composite odd n."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        # cycle collapsed; retry with fresh parameters


@dataclass(frozen=True)
class Factorization:
    """n as a sorted list of (prime, exponent) pairs."""

    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def omega(self) -> int:
        """Prime factors counted with multiplicity."""
        return sum(e for _, e in self.factors)

    def verify(self) -> bool:
        prod = 1
        for p, e in self.factors:
            prod *= p**e
        return prod == self.n and all(is_prime(p) for p, _ in self.factors)


def factor(n: int) -> Factorization:
    """Complete certified factorization of 1 <= n < 2^128."""
    if n < 1:
        raise ValueError("n must be positive")
    if n.bit_length() > INPUT_BITS:
        raise ValueError(f"n exceeds the {INPUT_BITS}-bit input range")
    counts: dict[int, int] = {}
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    stack = [m] if m > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        g = _brent_split(m, random.Random(m))
        stack += [g, m // g]
    out = Factorization(n=n, factors=tuple(sorted(counts.items())))
    if not out.verify():
        raise AssertionError(f"factorization of {n} failed certification")
    return out


def is_r_almost_prime(n: int, r: int) -> bool:
    """True when n has at most r prime factors counted with multiplicity."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if r < 1:
        raise ValueError("r must be at least 1")
    return factor(n).omega <= r


# ----- orbit classification -----


@dataclass(frozen=True)
class HypotenuseRecord:
    triple: Triple
    c: int
    d: int
    omega: int
    marker: str  # "prime" or "composite"


@dataclass(frozen=True)
class OrbitClassification:
    """Per-element hypotenuse records plus aggregate almost-prime counts."""

    rows: tuple[HypotenuseRecord, ...]
    r: int
    prime_count: int
    r_almost_count: int


def classify_orbit(ball: BallResult, r: int = 4) -> OrbitClassification:
    """Classify every bottom-row hypotenuse in the ball.

    The unit hypotenuse z = 1 (bottom row (0, 1) and friends) carries
    omega = 0 and the composite marker, and is excluded from the
    almost-prime aggregate, which otherwise counts omega <= r.
    """
    rows = []
    n_prime = n_almost = 0
    for g in ball.elements:
        trip = triple_of(g.c, g.d)
        om = factor(trip.z).omega
        marker = "prime" if om == 1 else "composite"
        if om == 1:
            n_prime += 1
        if 1 <= om <= r:
            n_almost += 1
        rows.append(
            HypotenuseRecord(triple=trip, c=g.c, d=g.d, omega=om, marker=marker)
        )
    return OrbitClassification(
        rows=tuple(rows), r=r, prime_count=n_prime, r_almost_count=n_almost
    )


def classification_to_csv(result: OrbitClassification, path: str | Path) -> None:
    """Rows x,y,z,c,d,omega,marker, one per ball element, plot-ready."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "z", "c", "d", "omega", "marker"])
        for row in result.rows:
            t = row.triple
            w.writerow([t.x, t.y, t.z, row.c, row.d, row.omega, row.marker])
