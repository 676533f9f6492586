"""Group specification and norm-ball enumeration.

A group is given by hyperbolic generators in SL2(Z).  Balls are enumerated by
breadth-first search over group elements (dedup by matrix value, so freeness
is never assumed) with a norm horizon: a node is expanded only while its
norm stays below T * S, where S is the largest generator norm.  Any element
of norm < T is one step away from something below that horizon, because
||g h|| >= ||g|| / ||h^{-1}|| and ||h^{-1}|| = ||h|| for det 1.  Completeness
under this pruning is cross-checked against wider horizons in the tests.

Every element carries a witness word over the step alphabet (generator i is
chr(ord('a')+i), its inverse the uppercase letter); the word is the shortest
one found, ties broken lexicographically, which makes output independent of
worker scheduling.
"""

from __future__ import annotations

import csv
import json
import math
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .algebra import Mat2, QForm, frobenius_norm_sq, mat_mul, qform_of
from .errors import BudgetExceededError

DEFAULT_CAP = 2_000_000


@dataclass(frozen=True)
class GroupSpec:
    """Finitely generated subgroup of SL2(Z) with hyperbolic generators."""

    generators: tuple[Mat2, ...]
    include_inverses: bool = True
    bad_modulus: int | None = None
    label: str = "group"
    cap: int = DEFAULT_CAP

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("GroupSpec needs at least one generator")
        if len(self.generators) > 26:
            raise ValueError("at most 26 generators (one letter each)")
        for g in self.generators:
            if abs(g.trace()) <= 2:
                raise ValueError(f"generator {g.entries()} is not hyperbolic (|trace| <= 2)")

    def steps(self) -> list[tuple[str, Mat2]]:
        """Step alphabet: (letter, matrix) pairs, inverses in uppercase."""
        out = []
        for i, g in enumerate(self.generators):
            out.append((chr(ord("a") + i), g))
        if self.include_inverses:
            for i, g in enumerate(self.generators):
                out.append((chr(ord("A") + i), g.inverse()))
        # a generator equal to another's inverse would duplicate a step matrix;
        # keep the first label for determinism
        seen: dict[tuple[int, int, int, int], str] = {}
        dedup = []
        for letter, g in out:
            key = g.entries()
            if key not in seen:
                seen[key] = letter
                dedup.append((letter, g))
        return dedup


def default_group() -> GroupSpec:
    """Two-generator test group, [[2,1],[3,2]] and [[3,2],[7,5]], with inverses.

    Reduction mod 11 lands in an index-12 subgroup (order 110 of 1320), so
    the bad modulus is 2 * 11; reduction surjects at every other prime
    checked up to 61.
    """
    return GroupSpec(
        generators=(Mat2(2, 1, 3, 2), Mat2(3, 2, 7, 5)),
        include_inverses=True,
        bad_modulus=22,
        label="default",
    )


@dataclass(frozen=True)
class BallResult:
    """Sorted ball {g : ||g|| < T} with one witness word per element."""

    threshold: float
    elements: tuple[Mat2, ...]
    words: tuple[str, ...]

    @property
    def count(self) -> int:
        return len(self.elements)

    def word_of(self, g: Mat2) -> str:
        # elements are sorted, but a dict lookup is clearer than bisecting
        try:
            return self.words[self.elements.index(g)]
        except ValueError:
            raise KeyError(f"{g.entries()} not in ball") from None


def _sort_key(g: Mat2) -> tuple[int, int, int, int, int]:
    return (frobenius_norm_sq(g), g.a, g.b, g.c, g.d)


def _expand_chunk(chunk, steps, horizon_sq):
    """Candidates reachable in one step from a frontier chunk: {entries: (word, Mat2)}."""
    found: dict[tuple[int, int, int, int], tuple[str, Mat2]] = {}
    for g, word in chunk:
        if frobenius_norm_sq(g) >= horizon_sq:
            continue
        for letter, s in steps:
            h = mat_mul(g, s)
            key = h.entries()
            cand = word + letter
            prev = found.get(key)
            if prev is None or cand < prev[0]:
                found[key] = (cand, h)
    return found


def enumerate_ball(
    spec: GroupSpec,
    T: float,
    *,
    cap: int | None = None,
    workers: int = 1,
    horizon_factor_sq: int | None = None,
) -> BallResult:
    """All distinct group elements of Frobenius norm < T, canonically sorted.

    T must be at least sqrt(2) (the identity's norm).  The search expands
    nodes with norm below T * S (S = max step norm); horizon_factor_sq
    overrides S^2 for cross-checking.  Raises BudgetExceededError when the
    number of discovered elements passes the cap.
    """
    if T * T < 2:
        raise ValueError(f"T must be >= sqrt(2), got {T}")
    cap = spec.cap if cap is None else cap
    steps = spec.steps()
    s_max_sq = max(frobenius_norm_sq(g) for _, g in steps)
    if horizon_factor_sq is None:
        horizon_factor_sq = s_max_sq
    t_sq = Fraction(T) ** 2
    horizon_sq = t_sq * horizon_factor_sq

    ident = Mat2.identity()
    best: dict[tuple[int, int, int, int], tuple[str, Mat2]] = {ident.entries(): ("", ident)}
    frontier: list[tuple[Mat2, str]] = [(ident, "")]
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            if workers > 1:
                size = math.ceil(len(frontier) / workers)
                chunks = [frontier[i : i + size] for i in range(0, len(frontier), size)]
                results = list(pool.map(lambda ch: _expand_chunk(ch, steps, horizon_sq), chunks))
            else:
                results = [_expand_chunk(frontier, steps, horizon_sq)]
            merged: dict[tuple[int, int, int, int], tuple[str, Mat2]] = {}
            for found in results:
                for key, (word, h) in found.items():
                    prev = merged.get(key)
                    if prev is None or word < prev[0]:
                        merged[key] = (word, h)
            frontier = []
            for key, (word, h) in merged.items():
                if key in best:
                    continue  # discovered at an earlier (shorter) level
                best[key] = (word, h)
                frontier.append((h, word))
            if len(best) > cap:
                raise BudgetExceededError(f"ball enumeration passed cap = {cap} elements")
    finally:
        if pool is not None:
            pool.shutdown()

    inside = [(g, word) for word, g in best.values() if frobenius_norm_sq(g) < t_sq]
    inside.sort(key=lambda gw: _sort_key(gw[0]))
    return BallResult(
        threshold=float(T),
        elements=tuple(g for g, _ in inside),
        words=tuple(w for _, w in inside),
    )


@dataclass(frozen=True)
class ProductBallSpec:
    """Nested-ball thresholds Y1 = Y2^C >= Y2 >= 1."""

    y1: float
    y2: float
    c: float

    def __post_init__(self) -> None:
        if not (self.y1 >= self.y2 >= 1):
            raise ValueError("need Y1 >= Y2 >= 1")
        if self.y2 > 1 and abs(self.y2**self.c - self.y1) > 1e-9 * self.y1:
            raise ValueError("Y1 and Y2^C disagree")

    @classmethod
    def from_exponent(cls, y2: float, c: float) -> "ProductBallSpec":
        return cls(y1=y2**c, y2=y2, c=c)

    @classmethod
    def from_pair(cls, y1: float, y2: float) -> "ProductBallSpec":
        if y1 == y2:
            return cls(y1=y1, y2=y2, c=1.0)
        if y2 <= 1:
            raise ValueError("cannot infer C with Y2 <= 1 and Y1 != Y2")
        return cls(y1=y1, y2=y2, c=math.log(y1) / math.log(y2))


def product_ball(
    spec: GroupSpec, p: ProductBallSpec, *, cap: int | None = None
) -> Counter[Mat2]:
    """Multiset {w1 * w2 : ||w1|| < Y1, ||w2|| < Y2} as a Counter.

    Total multiplicity is N(Y1) * N(Y2) by construction.
    """
    if p.y2 * p.y2 < 2:
        raise ValueError("Y2 must be >= sqrt(2)")
    cap = spec.cap if cap is None else cap
    b1 = enumerate_ball(spec, p.y1, cap=cap)
    b2 = enumerate_ball(spec, p.y2, cap=cap)
    if b1.count * b2.count > cap:
        raise BudgetExceededError(
            f"product multiset would hold {b1.count * b2.count} > cap = {cap} pairs"
        )
    out: Counter[Mat2] = Counter()
    for w1 in b1.elements:
        for w2 in b2.elements:
            out[mat_mul(w1, w2)] += 1
    return out


def estimate_delta(counts: Sequence[tuple[float, int]]) -> float:
    """Growth exponent estimate: half the log-log slope of N(T) against T.

    Needs >= 3 points whose T values span a factor of 8; all-equal counts are
    rejected as degenerate, and estimates outside (0, 1] are rejected too.
    """
    if len(counts) < 3:
        raise ValueError("need at least 3 (T, N) points")
    ts = [float(t) for t, _ in counts]
    ns = [int(n) for _, n in counts]
    if min(ts) <= 0 or min(ns) <= 0:
        raise ValueError("T and N must be positive")
    if max(ts) < 8 * min(ts):
        raise ValueError("T values must span a factor of at least 8")
    if len(set(ns)) == 1:
        raise ValueError("degenerate input: all counts equal")
    xs = [math.log(t) for t in ts]
    ys = [math.log(n) for n in ns]
    k = len(xs)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    slope = (k * sxy - sx * sy) / (k * sxx - sx * sx)
    delta = slope / 2
    if not 0 < delta <= 1:
        raise ValueError(f"estimated exponent {delta:.4f} outside (0, 1]")
    return delta


@dataclass(frozen=True)
class HyperbolicityReport:
    """Trace audit of a ball: elements with |trace| <= 2 other than +-I."""

    checked: int
    violations: tuple[Mat2, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_hyperbolicity(ball: BallResult) -> HyperbolicityReport:
    """Report non-identity elements with |trace| <= 2 (none for a valid group)."""
    ident = Mat2.identity()
    bad = tuple(
        g for g in ball.elements if abs(g.trace()) <= 2 and g not in (ident, -ident)
    )
    return HyperbolicityReport(checked=ball.count, violations=bad)


# ----- word replay and external formats -----


def word_to_mat(spec: GroupSpec, word: str) -> Mat2:
    """Multiply out a witness word over the step alphabet."""
    table = {letter: g for letter, g in spec.steps()}
    out = Mat2.identity()
    for letter in word:
        try:
            out = mat_mul(out, table[letter])
        except KeyError:
            raise ValueError(f"unknown step letter {letter!r}") from None
    return out


def load_group(path: str | Path) -> GroupSpec:
    """Read a group from JSON: {label, generators: [[a,b,c,d],...], include_inverses, cap}."""
    raw = json.loads(Path(path).read_text())
    gens = tuple(Mat2(*map(int, row)) for row in raw["generators"])
    return GroupSpec(
        generators=gens,
        include_inverses=bool(raw.get("include_inverses", True)),
        bad_modulus=raw.get("bad_modulus"),
        label=str(raw.get("label", Path(path).stem)),
        cap=int(raw.get("cap", DEFAULT_CAP)),
    )


def ball_to_csv(ball: BallResult, path: str | Path) -> None:
    """Write ball rows a,b,c,d,norm_sq,word in canonical order."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "b", "c", "d", "norm_sq", "word"])
        for g, word in zip(ball.elements, ball.words):
            w.writerow([g.a, g.b, g.c, g.d, frobenius_norm_sq(g), word])


def dyadic_counts(
    spec: GroupSpec, thresholds: Iterable[float], *, cap: int | None = None
) -> list[tuple[float, int]]:
    """(T, N(T)) table for a list of thresholds."""
    return [(float(t), enumerate_ball(spec, t, cap=cap).count) for t in thresholds]


def sample_forms(
    spec: GroupSpec, count: int, *, seed: int = 0, T: float = 40.0
) -> list[QForm]:
    """Distinct attached forms of ball elements, sampled reproducibly."""
    forms: list[QForm] = []
    seen: set[tuple[int, int, int]] = set()
    for g in enumerate_ball(spec, T).elements:
        f = qform_of(g)
        if (f.A, f.B, f.C) not in seen:
            seen.add((f.A, f.B, f.C))
            forms.append(f)
    if count > len(forms):
        raise ValueError(f"ball at T={T} only yields {len(forms)} distinct forms")
    return random.Random(seed).sample(forms, count)
