"""Exact integer and quadratic-irrational primitives."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Iterator

from .errors import InvalidDiscriminantError


def isqrt(n: int) -> int:
    """Floor of the square root of a nonnegative integer."""
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def is_discriminant(D: int) -> bool:
    """True for positive nonsquare D congruent to 0 or 1 mod 4."""
    return D > 0 and D % 4 in (0, 1) and not is_square(D)


def check_discriminant(D: int) -> None:
    if not isinstance(D, int) or not is_discriminant(D):
        raise InvalidDiscriminantError(
            f"{D} is not a positive nonsquare discriminant (D = 0, 1 mod 4)")


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs with increasing primes."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p ** e
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def factorize(n: int) -> Factorization:
    """Complete prime factorization of a positive integer."""
    if not isinstance(n, int) or n <= 0:
        raise ValueError(f"can only factor positive integers, got {n}")
    if n == 1:
        return Factorization(())
    from sympy import factorint

    return Factorization(tuple(sorted((int(p), int(e)) for p, e in factorint(n).items())))


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd positive n.
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class PeriodicCF:
    """Eventually periodic continued fraction [preperiod; period repeating]."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def terms(self) -> Iterator[int]:
        yield from self.preperiod
        while True:
            yield from self.period

    def convergent(self, n: int) -> Fraction:
        """Value of the first ``n`` partial quotients."""
        h0, h1 = 1, 0
        k0, k1 = 0, 1
        for a in islice(self.terms(), n):
            h0, h1 = a * h0 + h1, h0
            k0, k1 = a * k0 + k1, k0
        return Fraction(h0, k0)


def _floor_quadratic(P: int, Q: int, s: int) -> int:
    # floor((P + sqrt(D)) / Q) where s = isqrt(D) and D is not a square
    if Q > 0:
        return (P + s) // Q
    return -((P + s) // -Q) - 1


def cf_quadratic(P: int, Q: int, D: int) -> PeriodicCF:
    """Continued fraction of (P + sqrt(D)) / Q, exact.

    Uses the PQa recurrence; the expansion is cut where a complete quotient
    repeats, which yields the minimal preperiod and minimal period.
    """
    if Q == 0:
        raise ValueError("Q must be nonzero")
    if D <= 0 or is_square(D):
        raise ValueError(f"D = {D} must be a positive nonsquare")
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    s = math.isqrt(D)
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(quotients)
        a = _floor_quadratic(P, Q, s)
        quotients.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    start = seen[(P, Q)]
    return PeriodicCF(tuple(quotients[:start]), tuple(quotients[start:]))


@dataclass(frozen=True)
class PellSolution:
    t: int
    u: int


def _mat_mul(m, n):
    return (m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
            m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3])


def pell_minimal(D: int) -> PellSolution:
    """Smallest positive solution of t^2 - D u^2 = 4.

    Multiplies the turn matrices of the river of the principal form over one
    period; the trace of that product is t.
    """
    check_discriminant(D)
    b = D % 2
    cf = cf_quadratic(-b, 2, D)
    # River letters by parity of index: odd -> R = (1 0; 1 1), even -> L = (1 1; 0 1).
    start = len(cf.preperiod)
    period = cf.period if len(cf.period) % 2 == 0 else cf.period * 2
    m = (1, 0, 0, 1)
    for offset, a in enumerate(period):
        if (start + offset) % 2:
            m = _mat_mul(m, (1, 0, a, 1))
        else:
            m = _mat_mul(m, (1, a, 0, 1))
    t = m[0] + m[3]
    u2, rem = divmod(t * t - 4, D)
    u = math.isqrt(u2)
    assert rem == 0 and u * u == u2, "river product is not an automorph"
    return PellSolution(t, u)


def is_fundamental(D: int) -> bool:
    """True if D is the discriminant of a real quadratic field."""
    if D <= 1 or is_square(D):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def regulator(D: int, halved: bool = False) -> float:
    """log(T + U sqrt(D)) for the minimal Pell solution; log of half that if ``halved``.

    Uses U sqrt(D) = sqrt(T^2 - 4), so huge solutions never pass through floats.
    """
    t = pell_minimal(D).t
    lt = math.log(t)
    value = lt + math.log1p(math.sqrt(1.0 - 4.0 / t / t)) if t < 1 << 500 else lt + math.log(2.0)
    return value - math.log(2.0) if halved else value
