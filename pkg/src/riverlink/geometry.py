"""Root geodesics in the upper half plane: where and how two of them cross.

Predicates and signs are exact integer arithmetic; floats only show up in
reported points, angles and distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import InvalidMatrixError, RiverlinkError
from .forms import Pibqf, UniModularMatrix, _mul, b_delta


def _sign_surd(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for integers a, b and d >= 0."""
    if b == 0 or d == 0:
        return (a > 0) - (a < 0)
    if a >= 0 and b > 0:
        return 1
    if a <= 0 and b < 0:
        return -1
    diff = a * a - b * b * d
    if diff == 0:
        return 0
    return (a > 0) - (a < 0) if diff > 0 else (b > 0) - (b < 0)


@total_ordering
@dataclass(frozen=True, init=False)
class QuadraticNumber:
    """Exact real number (p + q*sqrt(d)) / r with r > 0 and gcd(p, q, r) = 1."""

    p: int
    q: int
    r: int
    d: int

    def __init__(self, p: int, q: int, r: int, d: int):
        if r == 0:
            raise ZeroDivisionError("denominator is zero")
        if d < 0:
            raise ValueError("d must be nonnegative")
        if r < 0:
            p, q, r = -p, -q, -r
        # fold a factor 4 of d into q when that lowers the terms
        while d % 4 == 0 and d and p % 2 == 0 and r % 2 == 0:
            p, r, d = p // 2, r // 2, d // 4
        g = math.gcd(math.gcd(p, q), r)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)
        object.__setattr__(self, "r", r // g)
        object.__setattr__(self, "d", d)

    def __float__(self) -> float:
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def __str__(self) -> str:
        if self.q == 0:
            return f"{self.p}/{self.r}" if self.r != 1 else str(self.p)
        sign = "+" if self.q > 0 else "-"
        coef = "" if abs(self.q) == 1 else str(abs(self.q))
        num = f"{self.p}{sign}{coef}√{self.d}" if self.p else f"{'-' if self.q < 0 else ''}{coef}√{self.d}"
        return f"({num})/{self.r}" if self.r != 1 else f"({num})"

    def _aligned(self, other) -> tuple[int, int, int, int, int, int, int]:
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return (self.p, self.q, self.r, int(other.numerator), 0, int(other.denominator), self.d)
        if not isinstance(other, QuadraticNumber):
            return NotImplemented
        p1, q1, r1, d1 = self.p, self.q, self.r, self.d
        p2, q2, r2, d2 = other.p, other.q, other.r, other.d
        if q1 == 0:
            d1 = d2
        elif q2 == 0:
            d2 = d1
        # sqrt(4^k d) = 2^k sqrt(d): bring both to the smaller radicand
        while d1 != d2:
            if d1 > d2 and d1 % 4 == 0:
                d1 //= 4
                q1 *= 2
            elif d2 > d1 and d2 % 4 == 0:
                d2 //= 4
                q2 *= 2
            else:
                raise TypeError(f"cannot compare surds over {self.d} and {other.d}")
        return p1, q1, r1, p2, q2, r2, d1

    def _cmp(self, other) -> int:
        p1, q1, r1, p2, q2, r2, d = self._aligned(other)
        return _sign_surd(p1 * r2 - p2 * r1, q1 * r2 - q2 * r1, d)

    def __eq__(self, other):
        if not isinstance(other, (int, Fraction, QuadraticNumber)):
            return NotImplemented
        try:
            return self._cmp(other) == 0
        except TypeError:
            return False

    def __lt__(self, other):
        if not isinstance(other, (int, Fraction, QuadraticNumber)):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        return hash((self.p, self.q, self.r, self.d))

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.p, -self.q, self.r, self.d)


def roots(q: Pibqf) -> tuple[QuadraticNumber, QuadraticNumber]:
    """First and second roots (q_f, q_s) of q(x, 1) = 0."""
    D = q.disc
    return (QuadraticNumber(-q.b, 1, 2 * q.a, D),
            QuadraticNumber(-q.b, -1, 2 * q.a, D)) if q.a else _vertical(q)


def _vertical(q: Pibqf):
    # A = 0 never happens for nonsquare D, but keep the failure explicit
    raise RiverlinkError(f"{q} has a root at infinity")


def evaluate_sign(q: Pibqf, x: QuadraticNumber) -> int:
    """Exact sign of q(x, 1)."""
    p, s, r, d = x.p, x.q, x.r, x.d
    a = q.a * (p * p + s * s * d) + q.b * p * r + q.c * r * r
    b = 2 * q.a * p * s + q.b * s * r
    return _sign_surd(a, b, d)


def geodesics_cross(q1: Pibqf, q2: Pibqf) -> bool:
    """True when the root geodesics meet transversely in the upper half plane."""
    return b_delta(q1, q2) ** 2 < q1.disc * q2.disc


def _require_cross(q1: Pibqf, q2: Pibqf) -> int:
    x = b_delta(q1, q2)
    if x * x >= q1.disc * q2.disc:
        raise RiverlinkError(f"the geodesics of {q1} and {q2} do not cross")
    return x


def crossing_sign(q1: Pibqf, q2: Pibqf) -> int:
    """+1 when the second geodesic crosses from right to left of the first."""
    _require_cross(q1, q2)
    v = q1.b * q2.a - q2.b * q1.a
    return 1 if v > 0 else -1


def point_form(q1: Pibqf, q2: Pibqf) -> tuple[int, int, int]:
    """Definite form whose upper half plane root is the crossing point."""
    A1, B1, C1 = q1.a, q1.b, q1.c
    A2, B2, C2 = q2.a, q2.b, q2.c
    return (A2 * B1 - A1 * B2, 2 * (A2 * C1 - A1 * C2), B2 * C1 - B1 * C2)


def _upper_root(a: int, b: int, c: int) -> complex:
    disc = b * b - 4 * a * c
    return complex(-b / (2 * a), math.sqrt(-disc) / (2 * abs(a)))


def crossing_angle(q1: Pibqf, q2: Pibqf) -> float:
    """Angle in (0, pi) from the tangent of the first geodesic to the second."""
    x = _require_cross(q1, q2)
    return math.atan2(math.sqrt(q1.disc * q2.disc - x * x), x)


@dataclass(frozen=True)
class IntersectionRecord:
    """One transverse crossing of two root geodesics."""

    bdelta: int
    sign: int
    point_form: tuple[int, int, int]
    point: complex
    angle: float
    arc_distance: float = 0.0

    def as_dict(self) -> dict:
        return {"bdelta": self.bdelta, "sign": self.sign,
                "point_form": list(self.point_form),
                "point_re": self.point.real, "point_im": self.point.imag,
                "angle": self.angle, "arc_distance": self.arc_distance}


def crossing_point(q1: Pibqf, q2: Pibqf, arc_distance: float = 0.0) -> IntersectionRecord:
    """Full crossing data for a pair of crossing geodesics."""
    x = _require_cross(q1, q2)
    f = point_form(q1, q2)
    assert f[1] * f[1] - 4 * f[0] * f[2] == x * x - q1.disc * q2.disc
    return IntersectionRecord(
        bdelta=x,
        sign=1 if f[0] > 0 else -1,
        point_form=f,
        point=_upper_root(*f),
        angle=math.atan2(math.sqrt(q1.disc * q2.disc - x * x), x),
        arc_distance=arc_distance,
    )


def trace_zero(m: UniModularMatrix) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """M - (tr M / 2) Id with exact rational entries."""
    half = Fraction(m.trace, 2)
    return ((m.a - half, Fraction(m.b)), (Fraction(m.c), m.d - half))


def _require_hyperbolic(m: UniModularMatrix) -> None:
    if abs(m.trace) <= 2:
        raise InvalidMatrixError(f"{m} is not hyperbolic")


def commutator_det_positive(m1: UniModularMatrix, m2: UniModularMatrix) -> bool:
    """det(M1 M2 - M2 M1) > 0, i.e. the axes of M1 and M2 cross."""
    _require_hyperbolic(m1)
    _require_hyperbolic(m2)
    x = (m1.a, m1.b, m1.c, m1.d)
    y = (m2.a, m2.b, m2.c, m2.d)
    # a sign flip of either lift negates the commutator and leaves its 2x2 determinant alone
    p, q = _mul(x, y), _mul(y, x)
    a, b, c, d = p[0] - q[0], p[1] - q[1], p[2] - q[2], p[3] - q[3]
    return a * d - b * c > 0


def hyperbolic_distance(z1: complex, z2: complex) -> float:
    """Distance in the upper half plane model."""
    if z1.imag <= 0 or z2.imag <= 0:
        raise ValueError("points must lie in the upper half plane")
    return math.acosh(1 + abs(z1 - z2) ** 2 / (2 * z1.imag * z2.imag))
