"""Reduction mod q, strong approximation, and admissible moduli.

Matrices mod q are packed 4-tuples (a, b, c, d) of residues, cheap to hash,
and the closure of the generator images is computed by plain BFS.  For a
prime p the reduction is surjective exactly when that closure has order
p (p^2 - 1); a subgroup seen to hold more than half the group must be the
whole group, so the search can stop early on that signal.

A modulus q is admissible for a given bad modulus B when q is squarefree,
every prime factor is 1 mod 4, and gcd(q, B) = 1.  B always carries the
factor 2; any odd prime where the group fails to surject gets folded in.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .algebra import Mat2
from .errors import BudgetExceededError
from .orbits import GroupSpec

PackedMat = tuple[int, int, int, int]


# ----- small number theory helpers -----


def primes_up_to(n: int) -> list[int]:
    """Primes <= n by sieve of Eratosthenes."""
    if n < 2:
        return []
    mark = bytearray([1]) * (n + 1)
    mark[0] = mark[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if mark[p]:
            mark[p * p :: p] = bytearray(len(mark[p * p :: p]))
    return [i for i in range(2, n + 1) if mark[i]]


def prime_factors(q: int) -> list[int]:
    """Distinct prime factors of q > 0, ascending (trial division)."""
    if q < 1:
        raise ValueError("q must be positive")
    out = []
    n = q
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_squarefree(q: int) -> bool:
    if q < 1:
        raise ValueError("q must be positive")
    n = q
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1 if p == 2 else 2
    return True


# ----- reduction and closure mod q -----


def reduce_mod(g: Mat2, q: int) -> PackedMat:
    """Entries of g reduced into [0, q)."""
    if q < 1:
        raise ValueError("modulus must be positive")
    return (g.a % q, g.b % q, g.c % q, g.d % q)


def _mul_mod(x: PackedMat, y: PackedMat, q: int) -> PackedMat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q)


def _inv_mod(x: PackedMat, q: int) -> PackedMat:
    # adjugate works because det = 1
    a, b, c, d = x
    return (d % q, -b % q, -c % q, a % q)


def _step_mats(spec: GroupSpec, q: int) -> list[PackedMat]:
    steps = [reduce_mod(g, q) for g in spec.generators]
    # always adjoin inverses mod q: the closure is the generated subgroup
    # either way (the group is finite), and inverses speed the BFS up
    steps += [_inv_mod(m, q) for m in steps]
    dedup: list[PackedMat] = []
    for m in steps:
        if m not in dedup:
            dedup.append(m)
    return dedup


def sl2_order(q: int) -> int:
    """|SL2(Z/q)| = q^3 * prod_{p | q} (1 - p^-2)."""
    if q < 1:
        raise ValueError("q must be positive")
    order = q**3
    for p in prime_factors(q):
        order = order // (p * p) * (p * p - 1)
    return order


def closure_mod(
    spec: GroupSpec,
    q: int,
    *,
    cap: int = 5_000_000,
    stop_past_half: bool = False,
) -> frozenset[PackedMat]:
    """Subgroup of SL2(Z/q) generated by the images of the generators.

    With stop_past_half the BFS returns a partial set as soon as it holds
    more than |SL2(Z/q)| / 2 elements; by Lagrange the closure is then the
    full group, and callers only wanted that fact.
    """
    steps = _step_mats(spec, q)
    ident: PackedMat = (1 % q, 0, 0, 1 % q)
    seen = {ident}
    queue = deque([ident])
    half = sl2_order(q) // 2
    while queue:
        cur = queue.popleft()
        for s in steps:
            nxt = _mul_mod(cur, s, q)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
                if stop_past_half and len(seen) > half:
                    return frozenset(seen)
                if len(seen) > cap:
                    raise BudgetExceededError(f"closure mod {q} passed cap = {cap}")
    return frozenset(seen)


# ----- strong approximation -----


@dataclass(frozen=True)
class StrongApproxResult:
    prime: int
    surjective: bool
    order_reached: int
    full_order: int

    def as_dict(self) -> dict:
        return {
            "prime": self.prime,
            "surjective": self.surjective,
            "order_reached": self.order_reached,
            "full_order": self.full_order,
        }


def strong_approx_check(spec: GroupSpec, p: int, *, exact_order: bool = False) -> StrongApproxResult:
    """Does the group surject onto SL2(Z/p)?

    order_reached is the exact closure order; for a surjective prime found
    via the past-half shortcut it is the full order, which Lagrange forces.
    Pass exact_order=True to disable the shortcut (used for cross-checks).
    """
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    full = sl2_order(p)
    cl = closure_mod(spec, p, stop_past_half=not exact_order)
    if exact_order or len(cl) <= full // 2:
        reached = len(cl)
    else:
        reached = full
    return StrongApproxResult(
        prime=p, surjective=reached == full, order_reached=reached, full_order=full
    )


def bad_primes(spec: GroupSpec, *, limit: int = 61) -> tuple[int, ...]:
    """Primes where reduction fails, plus 2 (always excluded by convention).

    Scans odd primes up to limit; prime factors of spec.bad_modulus are
    folded in without rescanning.
    """
    bad = {2}
    if spec.bad_modulus:
        bad.update(prime_factors(spec.bad_modulus))
    for p in primes_up_to(limit):
        if p == 2 or p in bad:
            continue
        if not strong_approx_check(spec, p).surjective:
            bad.add(p)
    return tuple(sorted(bad))


def bad_modulus(spec: GroupSpec, *, limit: int = 61) -> int:
    """Product of the bad primes (always even)."""
    return math.prod(bad_primes(spec, limit=limit))


# ----- admissible moduli -----


def is_admissible(q: int, bad_mod: int) -> bool:
    """Squarefree, every prime factor 1 mod 4, coprime to the bad modulus."""
    if q < 1:
        raise ValueError("q must be positive")
    if bad_mod % 2:
        raise ValueError("bad modulus must carry the factor 2")
    if math.gcd(q, bad_mod) != 1 or not is_squarefree(q):
        return False
    return all(p % 4 == 1 for p in prime_factors(q))


@dataclass(frozen=True)
class AdmissibleModulus:
    """A modulus certified admissible at construction time."""

    q: int
    primes: tuple[int, ...]
    bad_mod: int

    @classmethod
    def of(cls, q: int, bad_mod: int) -> "AdmissibleModulus":
        if not is_admissible(q, bad_mod):
            raise ValueError(f"{q} is not admissible for bad modulus {bad_mod}")
        return cls(q=q, primes=tuple(prime_factors(q)), bad_mod=bad_mod)


def admissible_moduli(limit: int, bad_mod: int) -> list[int]:
    """Admissible q <= limit, ascending, starting from q = 1."""
    return [q for q in range(1, limit + 1) if is_admissible(q, bad_mod)]


def quotient_size(q: int) -> int:
    """Size of the mod-q quotient the orbit sees: q^2 * prod_{p|q} (1 - p^-2).

    This counts the primitive row vectors mod q, i.e. the orbit of (0, 1)
    under the full SL2(Z/q).
    """
    if q < 1:
        raise ValueError("q must be positive")
    size = q * q
    for p in prime_factors(q):
        size = size // (p * p) * (p * p - 1)
    return size


def orbit_mod_q(spec: GroupSpec, q: int, *, cap: int = 5_000_000) -> frozenset[tuple[int, int]]:
    """Orbit of the bottom row (0, 1) mod q under right multiplication.

    When reduction is surjective this is every primitive vector mod q, so
    its size matches quotient_size(q).
    """
    steps = _step_mats(spec, q)
    start = (0, 1 % q)
    seen = {start}
    queue = deque([start])
    while queue:
        c, d = queue.popleft()
        for a, b, cc, dd in steps:
            nxt = ((c * a + d * cc) % q, (c * b + d * dd) % q)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
                if len(seen) > cap:
                    raise BudgetExceededError(f"orbit mod {q} passed cap = {cap}")
    return frozenset(seen)
