"""Exact integer linear algebra: unimodular 2x2 matrices, the double cover
into the isometries of x^2 + y^2 - z^2, and the attached quadratic forms.

Conventions: vectors are rows acted on by right multiplication, so the base
point (0,1) picks out the bottom row (c,d) of a matrix, and the lifted base
point (1,0,1) picks out the hypotenuse c^2 + d^2.  Everything is arbitrary
precision; no floats enter this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True, order=True)
class Mat2:
    """Integer 2x2 matrix [[a,b],[c,d]] with det = 1, checked on construction."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        det = self.a * self.d - self.b * self.c
        if det != 1:
            raise ValueError(f"Mat2 requires det 1, got det = {det}")

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def __mul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def inverse(self) -> "Mat2":
        # adjugate of a det-1 matrix
        return Mat2(self.d, -self.b, -self.c, self.a)

    def trace(self) -> int:
        return self.a + self.d

    def bottom_row(self) -> tuple[int, int]:
        return (self.c, self.d)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)


_DIAG_SIG = (Fraction(1), Fraction(1), Fraction(-1))


@dataclass(frozen=True)
class Mat3:
    """Rational 3x3 matrix preserving F(x,y,z) = x^2 + y^2 - z^2, with det 1.

    Rows stored flat as nine Fractions (row-major).  Construction checks both
    invariants exactly.
    """

    rows: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != 9:
            raise ValueError("Mat3 needs nine entries")
        m = self.rows
        det = (
            m[0] * (m[4] * m[8] - m[5] * m[7])
            - m[1] * (m[3] * m[8] - m[5] * m[6])
            + m[2] * (m[3] * m[7] - m[4] * m[6])
        )
        if det != 1:
            raise ValueError(f"Mat3 requires det 1, got {det}")
        # t(M) . diag(1,1,-1) . M == diag(1,1,-1), checked entrywise
        for i in range(3):
            for j in range(3):
                want = _DIAG_SIG[i] if i == j else Fraction(0)
                got = sum(m[k * 3 + i] * _DIAG_SIG[k] * m[k * 3 + j] for k in range(3))
                if got != want:
                    raise ValueError("Mat3 does not preserve x^2 + y^2 - z^2")

    @classmethod
    def from_rows(cls, rows) -> "Mat3":
        flat = tuple(Fraction(x) for row in rows for x in row)
        return cls(flat)

    @classmethod
    def identity(cls) -> "Mat3":
        return cls.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def __mul__(self, other: "Mat3") -> "Mat3":
        a, b = self.rows, other.rows
        out = []
        for i in range(3):
            for j in range(3):
                out.append(sum(a[i * 3 + k] * b[k * 3 + j] for k in range(3)))
        return Mat3(tuple(out))

    def act_row(self, v: tuple) -> tuple:
        """Right action on a row vector: v . M."""
        m = self.rows
        return tuple(sum(v[k] * m[k * 3 + j] for k in range(3)) for j in range(3))


@dataclass(frozen=True)
class Triple:
    """Pythagorean triple (x, y, z) with x^2 + y^2 = z^2 checked exactly."""

    x: int
    y: int
    z: int

    def __post_init__(self) -> None:
        if self.x * self.x + self.y * self.y != self.z * self.z:
            raise ValueError(f"not a Pythagorean triple: {(self.x, self.y, self.z)}")


@dataclass(frozen=True)
class QForm:
    """Positive-definite binary form A x^2 + 2B xy + C y^2 with AC - B^2 = 1."""

    A: int
    B: int
    C: int

    def __post_init__(self) -> None:
        if self.A * self.C - self.B * self.B != 1:
            raise ValueError("QForm requires AC - B^2 = 1")
        if self.A <= 0 or self.C <= 0:
            raise ValueError("QForm must be positive definite")


def mat_mul(g: Mat2, h: Mat2) -> Mat2:
    """Product of two unimodular matrices."""
    return Mat2(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


def frobenius_norm_sq(g: Mat2) -> int:
    """a^2 + b^2 + c^2 + d^2 = tr(g . t(g))."""
    return g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d


def spin(g: Mat2) -> Mat3:
    """Image of g under the double cover into the isometries of x^2+y^2-z^2.

    Entries are half-integers individually but every row-vector image of an
    integer point on the cone is integral; stored exactly as Fractions.
    spin(-g) = spin(g), and spin is a homomorphism.
    """
    a, b, c, d = g.a, g.b, g.c, g.d
    h = Fraction(1, 2)
    return Mat3(
        (
            h * (a * a - b * b - c * c + d * d),
            Fraction(c * d - a * b),
            h * (-a * a - b * b + c * c + d * d),
            Fraction(b * d - a * c),
            Fraction(b * c + a * d),
            Fraction(a * c + b * d),
            h * (-a * a + b * b - c * c + d * d),
            Fraction(a * b + c * d),
            h * (a * a + b * b + c * c + d * d),
        )
    )


BASE_POINT = (1, 0, 1)  # the triple (1,0,1), i.e. (0,1) upstairs


def triple_of(c: int, d: int) -> Triple:
    """Triple (c^2 - d^2, 2cd, c^2 + d^2); hypotenuse is always nonnegative."""
    return Triple(c * c - d * d, 2 * c * d, c * c + d * d)


def qform_of(g: Mat2) -> QForm:
    """Form attached to g via g . t(g) = [[A,B],[B,C]]."""
    return QForm(
        g.a * g.a + g.b * g.b,
        g.a * g.c + g.b * g.d,
        g.c * g.c + g.d * g.d,
    )


def qform_eval(q: QForm, c: int, d: int) -> int:
    """Value A c^2 + 2B cd + C d^2; zero only at the origin."""
    return q.A * c * c + 2 * q.B * c * d + q.C * d * d


def form_f(t: Triple | tuple) -> int:
    """The cone form x^2 + y^2 - z^2 on a triple or raw 3-vector."""
    if isinstance(t, Triple):
        x, y, z = t.x, t.y, t.z
    else:
        x, y, z = t
    return x * x + y * y - z * z
