"""Primitive indefinite binary quadratic forms and the PSL(2,Z) action.

Forms are written [A,B,C] = Ax^2 + Bxy + Cy^2 and PSL(2,Z) acts on the right:
``act(m, q)(x, y) = q(ax + by, cx + dy)``, so ``act(n, act(m, q)) == act(m @ n, q)``.

Along the river of a form (the forms with AC < 0) every edge has exactly one
orientation with A > 0; we call that the flow orientation.  Stepping forward
and turning left multiplies by L = T, turning right by R.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .arith import check_discriminant, is_square, pell_minimal, _floor_quadratic
from .errors import InvalidFormError, InvalidMatrixError


@dataclass(frozen=True)
class Pibqf:
    """A primitive indefinite binary quadratic form [a, b, c]."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        for v in (self.a, self.b, self.c):
            if not isinstance(v, int) or isinstance(v, bool):
                raise InvalidFormError(f"coefficients must be integers, got {v!r}")
        if math.gcd(self.a, self.b, self.c) != 1:
            raise InvalidFormError(f"{self} is not primitive")
        D = self.b * self.b - 4 * self.a * self.c
        if D <= 0:
            raise InvalidFormError(f"{self} has discriminant {D} <= 0 (not indefinite)")
        if is_square(D):
            raise InvalidFormError(f"{self} has square discriminant {D} (split form)")

    @classmethod
    def _trusted(cls, a: int, b: int, c: int) -> "Pibqf":
        # Skips validation; callers guarantee primitivity and discriminant.
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "c", c)
        return obj

    @classmethod
    def parse(cls, text: str) -> "Pibqf":
        """Parse the literal ``[A,B,C]`` (whitespace tolerated)."""
        m = re.fullmatch(r"\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*", text)
        if not m:
            raise InvalidFormError(f"malformed form literal {text!r}, expected [A,B,C]")
        return cls(*(int(g) for g in m.groups()))

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __neg__(self) -> "Pibqf":
        return Pibqf._trusted(-self.a, -self.b, -self.c)

    def __str__(self) -> str:
        return f"[{self.a},{self.b},{self.c}]"

    def astuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class UniModularMatrix:
    """An element of PSL(2,Z), stored with its first nonzero entry positive."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise InvalidMatrixError(f"{self.astuple()} does not have determinant 1")
        first = next(v for v in (self.a, self.b, self.c, self.d) if v)
        if first < 0:
            for name in "abcd":
                object.__setattr__(self, name, -getattr(self, name))

    @classmethod
    def identity(cls) -> "UniModularMatrix":
        return cls(1, 0, 0, 1)

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def trace(self) -> int:
        return self.a + self.d

    def positive_lift(self) -> tuple[int, int, int, int]:
        """The SL(2,Z) lift with nonnegative trace."""
        if self.trace < 0:
            return (-self.a, -self.b, -self.c, -self.d)
        return self.astuple()

    def __matmul__(self, other: "UniModularMatrix") -> "UniModularMatrix":
        return UniModularMatrix(*_mul(self.astuple(), other.astuple()))

    def inverse(self) -> "UniModularMatrix":
        return UniModularMatrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> "UniModularMatrix":
        base = self if k >= 0 else self.inverse()
        out = (1, 0, 0, 1)
        m = base.astuple()
        k = abs(k)
        while k:
            if k & 1:
                out = _mul(out, m)
            m = _mul(m, m)
            k >>= 1
        return UniModularMatrix(*out)


def _mul(m, n):
    return (m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
            m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3])


L = UniModularMatrix(1, 1, 0, 1)
T = L
R = UniModularMatrix(1, 0, 1, 1)
S = UniModularMatrix(0, 1, -1, 0)
IDENTITY = UniModularMatrix.identity()
_GENERATORS = {"L": L, "R": R, "S": S}


def discriminant(q: Pibqf) -> int:
    return q.disc


def _act(m, A, B, C):
    a, b, c, d = m
    return (A * a * a + B * a * c + C * c * c,
            2 * A * a * b + B * (a * d + b * c) + 2 * C * c * d,
            A * b * b + B * b * d + C * d * d)


def act(m: UniModularMatrix, q: Pibqf) -> Pibqf:
    """The form (x, y) -> q(ax + by, cx + dy)."""
    return Pibqf._trusted(*_act(m.astuple(), q.a, q.b, q.c))


def b_delta(q1: Pibqf, q2: Pibqf) -> int:
    """B1 B2 - 2 A1 C2 - 2 A2 C1."""
    return q1.b * q2.b - 2 * q1.a * q2.c - 2 * q2.a * q1.c


def reciprocal(q: Pibqf) -> Pibqf:
    return -q


@lru_cache(maxsize=4096)
def _pell(D: int):
    sol = pell_minimal(D)
    return sol.t, sol.u


def automorph(q: Pibqf) -> UniModularMatrix:
    """Generator of the stabiliser of q, built from the minimal Pell solution."""
    t, u = _pell(q.disc)
    return UniModularMatrix((t - q.b * u) // 2, -q.c * u, q.a * u, (t + q.b * u) // 2)


def form_from_matrix(m: UniModularMatrix) -> Pibqf:
    """The form whose invariant automorph is the primitive hyperbolic ``m``."""
    if abs(m.trace) <= 2:
        raise InvalidMatrixError(f"{m.rows()} is not hyperbolic (|trace| <= 2)")
    a, b, c, d = m.positive_lift()
    g = math.gcd(c, d - a, b)
    q = Pibqf._trusted(c // g, (d - a) // g, -b // g)
    if automorph(q).astuple() != m.astuple():
        raise InvalidMatrixError(f"{m.rows()} is not primitive (a proper power in PSL(2,Z))")
    return q


def path_to_matrix(word: str) -> UniModularMatrix:
    """Left-to-right product of the generators named in ``word`` (over L, R, S)."""
    out = (1, 0, 0, 1)
    for ch in word:
        try:
            out = _mul(out, _GENERATORS[ch].astuple())
        except KeyError:
            raise ValueError(f"invalid path character {ch!r}; expected L, R or S") from None
    return UniModularMatrix(*out)


def is_reduced(q: Pibqf) -> bool:
    return q.a * q.c < 0 and q.b > abs(q.a + q.c)


# --- walking the river ------------------------------------------------------

def _next_letter(A, B, C) -> str:
    # flow-oriented river form: the region ahead holds q(1,1) = A + B + C
    return "R" if A + B + C > 0 else "L"


def _run(A, B, C, s):
    """Letter, length and end form of the run starting at a flow-oriented form."""
    if A + B + C > 0:
        k = _floor_quadratic(B, -2 * C, s)
        return "R", k, (A + B * k + C * k * k, B + 2 * k * C, C)
    k = _floor_quadratic(-B, 2 * A, s)
    return "L", k, (A, B + 2 * k * A, A * k * k + B * k + C)


def _run_matrix(letter: str, k: int):
    return (1, 0, k, 1) if letter == "R" else (1, k, 0, 1)


def _to_river(q: Pibqf):
    """A flow-oriented river form equivalent to q, with witness matrix."""
    A, B, C = q.a, q.b, q.c
    m = (1, 0, 0, 1)
    while A * C > 0:
        n = 2 * abs(A)
        b2 = (B + abs(A) - 1) % n - abs(A) + 1
        k = (b2 - B) // (2 * A)
        A, B, C = A, b2, A * k * k + B * k + C
        m = _mul(m, (1, k, 0, 1))
        if A * C > 0:
            A, B, C = C, -B, A
            m = _mul(m, (0, 1, -1, 0))
    if A < 0:
        A, B, C = C, -B, A
        m = _mul(m, (0, 1, -1, 0))
    return (A, B, C), m


def reduce(q: Pibqf) -> tuple[Pibqf, UniModularMatrix]:
    """A reduced form q' and m with act(m, q) == q'."""
    if is_reduced(q):
        return q, IDENTITY
    (A, B, C), m = _to_river(q)
    s = math.isqrt(q.disc)
    letter, k, (A, B, C) = _run(A, B, C, s)
    m = _mul(m, _run_matrix(letter, k))
    if letter == "R":
        A, B, C = C, -B, A
        m = _mul(m, (0, 1, -1, 0))
    return Pibqf._trusted(A, B, C), UniModularMatrix(*m)


def _cycle_with_paths(q: Pibqf) -> Iterator[tuple[Pibqf, tuple]]:
    # q reduced; yields (reduced form, matrix taking q to it) around the cycle
    if not is_reduced(q):
        raise InvalidFormError(f"{q} is not reduced")
    s = math.isqrt(q.disc)
    if q.a > 0:
        start, m = q.astuple(), (1, 0, 0, 1)
    else:
        start, m = (q.c, -q.b, q.a), (0, 1, -1, 0)
    yield q, (1, 0, 0, 1)
    form = start
    while True:
        letter, k, form = _run(*form, s)
        m = _mul(m, _run_matrix(letter, k))
        if form == start:
            return
        if letter == "L":
            yield Pibqf._trusted(*form), m
        else:
            A, B, C = form
            yield Pibqf._trusted(C, -B, A), _mul(m, (0, 1, -1, 0))


def reduced_cycle(q: Pibqf) -> list[Pibqf]:
    """The reduced forms met riding the river of q in flow direction.

    Starts at q when q is reduced, otherwise at reduce(q).
    """
    return [f for f, _ in _cycle_with_paths(reduce(q)[0])]


def river_walk(q: Pibqf) -> tuple[str, list[Pibqf], UniModularMatrix]:
    """One river period of q's class, letter by letter.

    Returns ``(letters, forms, m)``: ``forms[t]`` are the flow-oriented river
    forms, ``forms[t + 1] == act(letters[t], forms[t])``, and
    ``act(m, q) == forms[0]``.  The walk starts at a reduced form with A > 0.
    """
    (A, B, C), m = _to_river(q)
    s = math.isqrt(q.disc)
    letter, k, (A, B, C) = _run(A, B, C, s)
    m = _mul(m, _run_matrix(letter, k))
    if letter == "R":
        # step through the following L-run so the walk starts where R begins
        letter, k, (A, B, C) = _run(A, B, C, s)
        m = _mul(m, _run_matrix(letter, k))
    start = (A, B, C)
    letters: list[str] = []
    forms: list[Pibqf] = []
    while True:
        if A + B + C > 0:
            k = _floor_quadratic(B, -2 * C, s)
            for j in range(k):
                forms.append(Pibqf._trusted(A + B * j + C * j * j, B + 2 * j * C, C))
            A, B = A + B * k + C * k * k, B + 2 * k * C
            letters.append("R" * k)
        else:
            k = _floor_quadratic(-B, 2 * A, s)
            for j in range(k):
                forms.append(Pibqf._trusted(A, B + 2 * j * A, A * j * j + B * j + C))
            B, C = B + 2 * k * A, A * k * k + B * k + C
            letters.append("L" * k)
        if (A, B, C) == start:
            break
    return "".join(letters), forms, UniModularMatrix(*m)


def river_runs(q: Pibqf) -> list[tuple[str, int]]:
    """Run-length encoding of one river period, starting with an R-run."""
    (A, B, C), _ = _to_river(q)
    s = math.isqrt(q.disc)
    letter, _, (A, B, C) = _run(A, B, C, s)
    if letter == "R":
        _, _, (A, B, C) = _run(A, B, C, s)
    start = (A, B, C)
    runs = []
    while True:
        letter, k, (A, B, C) = _run(A, B, C, s)
        runs.append((letter, k))
        if (A, B, C) == start:
            return runs


# --- classes ----------------------------------------------------------------

def _class_key(q: Pibqf):
    return (abs(q.a), q.a, q.b)


def class_representative(q: Pibqf) -> Pibqf:
    """Canonical representative: the reduced form of minimal (|A|, A, B)."""
    return min(reduced_cycle(reduce(q)[0]), key=_class_key)


def reduced_forms(D: int) -> list[Pibqf]:
    """All reduced forms of discriminant D."""
    check_discriminant(D)
    out = []
    sqrt_d = math.sqrt(D)
    for B in range(D % 2 or 2, math.isqrt(D) + 1, 2):
        N = (D - B * B) // 4
        # reduced  <=>  |a - N/a| < B  <=>  (sqrt(D) - B)/2 < a < (sqrt(D) + B)/2
        lo = max(1, int((sqrt_d - B) / 2) - 1)
        hi = int((sqrt_d + B) / 2) + 2
        for a in range(lo, hi + 1):
            if N % a:
                continue
            c = N // a
            if abs(a - c) >= B or math.gcd(a, B, c) != 1:
                continue
            out.append(Pibqf._trusted(a, B, -c))
            out.append(Pibqf._trusted(-a, B, c))
    return out


@lru_cache(maxsize=256)
def _class_group(D: int) -> tuple[Pibqf, ...]:
    remaining = set(reduced_forms(D))
    reps = []
    while remaining:
        cycle = reduced_cycle(next(iter(remaining)))
        remaining.difference_update(cycle)
        reps.append(min(cycle, key=_class_key))
    return tuple(sorted(reps, key=_class_key))


def narrow_class_group(D: int) -> list[Pibqf]:
    """One reduced representative per narrow class of discriminant D."""
    check_discriminant(D)
    return list(_class_group(D))


def class_number(D: int) -> int:
    return len(narrow_class_group(D))


def is_equivalent(q1: Pibqf, q2: Pibqf) -> Optional[UniModularMatrix]:
    """A witness m with act(m, q1) == q2, or None if the forms are inequivalent."""
    if q1.disc != q2.disc:
        return None
    r1, m1 = reduce(q1)
    r2, m2 = reduce(q2)
    for f, c in _cycle_with_paths(r1):
        if f == r2:
            return m1 @ UniModularMatrix(*c) @ m2.inverse()
    return None


def is_reciprocal_class(q: Pibqf) -> bool:
    return is_equivalent(q, -q) is not None


def strongly_inequivalent(q1: Pibqf, q2: Pibqf) -> bool:
    if q1.disc != q2.disc:
        return True
    return is_equivalent(q1, q2) is None and is_equivalent(q1, -q2) is None
