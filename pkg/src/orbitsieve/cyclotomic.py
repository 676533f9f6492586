"""Exact arithmetic with roots of unity.

Write e_q(k) for e(k/q) = exp(2*pi*i*k/q).  A value is stored as a length-q
vector of rational coefficients, index k holding the coefficient of e_q(k).
The representation is redundant (the field has degree phi(q)), so equality
and rationality questions are settled by reducing the coefficient polynomial
mod the q-th cyclotomic polynomial.  Everything is exact; there is no float
anywhere except the to_complex() convenience used by sanity tests.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

Scalar = Union[int, Fraction]


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Long division of integer polynomials, coefficients ascending, den monic."""
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    out = [0] * max(1, len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        coef = rem[shift + len(den) - 1]
        if coef:
            out[shift] = coef
            for i, d in enumerate(den):
                rem[shift + i] -= coef * d
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return out, rem


@lru_cache(maxsize=None)
def cyclotomic_poly(q: int) -> tuple[int, ...]:
    """Coefficients of the q-th cyclotomic polynomial, ascending degree.

    Computed as (x^q - 1) divided by the product of the lower cyclotomic
    polynomials at divisors of q; the division is exact over the integers.
    """
    if q < 1:
        raise ValueError("q must be positive")
    if q == 1:
        return (-1, 1)
    num = [-1] + [0] * (q - 1) + [1]
    for d in range(1, q):
        if q % d == 0:
            num, rem = _poly_divmod_int(num, list(cyclotomic_poly(d)))
            if rem != [0]:
                raise AssertionError(f"nonzero remainder splitting x^{q}-1 at d={d}")
    return tuple(num)


class ComplexExact:
    """Element of the cyclotomic field Q(e_q(1)) with exact coefficients."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q: int, coeffs: Iterable[Scalar] | None = None):
        if q < 1:
            raise ValueError("q must be positive")
        self.q = q
        if coeffs is None:
            self.coeffs = [Fraction(0)] * q
        else:
            self.coeffs = [Fraction(c) for c in coeffs]
            if len(self.coeffs) != q:
                raise ValueError(f"need exactly {q} coefficients")

    @classmethod
    def root(cls, q: int, k: int = 1) -> "ComplexExact":
        """The root of unity e_q(k)."""
        out = cls(q)
        out.coeffs[k % q] = Fraction(1)
        return out

    def add_term(self, k: int, coeff: Scalar) -> None:
        """Accumulate coeff * e_q(k) in place."""
        self.coeffs[k % self.q] += coeff

    def _check_mod(self, other: "ComplexExact") -> None:
        if self.q != other.q:
            raise ValueError(f"mixed moduli {self.q} and {other.q}")

    def __add__(self, other: "ComplexExact") -> "ComplexExact":
        self._check_mod(other)
        return ComplexExact(self.q, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "ComplexExact") -> "ComplexExact":
        self._check_mod(other)
        return ComplexExact(self.q, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other: "ComplexExact | Scalar") -> "ComplexExact":
        if isinstance(other, (int, Fraction)):
            return ComplexExact(self.q, [c * other for c in self.coeffs])
        self._check_mod(other)
        out = [Fraction(0)] * self.q
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % self.q] += a * b
        return ComplexExact(self.q, out)

    __rmul__ = __mul__

    def reduced(self) -> tuple[Fraction, ...]:
        """Canonical form: remainder of the coefficient polynomial mod Phi_q."""
        phi = cyclotomic_poly(self.q)
        rem = list(self.coeffs)
        deg_phi = len(phi) - 1
        for shift in range(len(rem) - len(phi), -1, -1):
            coef = rem[shift + deg_phi]
            if coef:
                for i, d in enumerate(phi):
                    rem[shift + i] -= coef * d
        return tuple(rem[:deg_phi])

    def is_rational(self) -> bool:
        red = self.reduced()
        return all(c == 0 for c in red[1:])

    def rational_value(self) -> Fraction:
        """The value as a Fraction; raises if the element is irrational."""
        red = self.reduced()
        if any(c != 0 for c in red[1:]):
            raise ValueError(f"value is not rational (reduced form {red})")
        return red[0]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.reduced()[0] == other
        if not isinstance(other, ComplexExact):
            return NotImplemented
        self._check_mod(other)
        return (self - other).reduced() == tuple([Fraction(0)] * (len(self.reduced())))

    def __hash__(self):
        return hash((self.q, self.reduced()))

    def to_complex(self) -> complex:
        """Float approximation, for cross-checking only."""
        return sum(
            complex(c) * cmath.exp(2j * cmath.pi * k / self.q)
            for k, c in enumerate(self.coeffs)
            if c
        )

    def __repr__(self) -> str:
        terms = [f"{c}*e_{self.q}({k})" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"
