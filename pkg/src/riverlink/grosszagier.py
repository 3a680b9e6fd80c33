"""Exact counts of crossing pairs by value of B_Delta, and their totals.

For coprime fundamental discriminants D1, D2 the number of pair classes with
B_Delta = n is an epsilon-weighted divisor sum over N = (D1 D2 - n^2) / 4;
summing over n gives the total intersection number, which must agree with the
sum of river-based intersection numbers over all class pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels
from .arith import check_discriminant, factorize, is_fundamental, kronecker
from .errors import ScopeError
from .forms import Pibqf, narrow_class_group
from .intersect import intersection_number


def s_range(D1: int, D2: int) -> list[int]:
    """All n with |n| < sqrt(D1 D2) and n = D1 D2 (mod 2), increasing."""
    check_discriminant(D1)
    check_discriminant(D2)
    P = D1 * D2
    top = math.isqrt(P)
    if top * top == P:
        top -= 1
    if (top - P) % 2:
        top -= 1
    return list(range(-top, top + 1, 2))


def _check_scope(D1: int, D2: int) -> None:
    check_discriminant(D1)
    check_discriminant(D2)
    if D1 == D2:
        raise ScopeError(f"the counting formula needs distinct discriminants, got {D1} twice")
    if math.gcd(D1, D2) != 1:
        raise ScopeError(f"the counting formula needs coprime discriminants, got gcd({D1}, {D2}) = {math.gcd(D1, D2)}")
    for D in (D1, D2):
        if not is_fundamental(D):
            raise ScopeError(f"the counting formula needs fundamental discriminants, {D} is not")


def _epsilon_prime(D1: int, D2: int, p: int) -> int:
    for D in (D1, D2):
        v = kronecker(D, p)
        if v:
            if kronecker(D1 * D2, p) == -1:
                break
            return v
    raise ScopeError(f"epsilon({p}) is undefined for ({D1}, {D2})")


def epsilon(D1: int, D2: int, m: int) -> int:
    """Multiplicative extension of the nonzero symbol among (D1/p), (D2/p)."""
    _check_scope(D1, D2)
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    out = 1
    for p, e in factorize(m):
        if e % 2:
            out *= _epsilon_prime(D1, D2, p)
    return out


@dataclass(frozen=True)
class PrimeRole:
    """A prime of N with its exponent, epsilon and role (p: eps=-1 odd, q: eps=-1 even, w: eps=+1)."""

    prime: int
    exponent: int
    eps: int
    role: str


@dataclass(frozen=True)
class PnProfile:
    """p(n) for one n, with the classified factorization of N = (D1 D2 - n^2) / 4."""

    n: int
    N: int
    value: int
    factor_classes: tuple[PrimeRole, ...]
    divisor_sum: int

    @property
    def r(self) -> int:
        return sum(1 for f in self.factor_classes if f.role == "p")


def p_count(D1: int, D2: int, n: int) -> PnProfile:
    """Number of simultaneous classes of crossing pairs with B_Delta = n."""
    _check_scope(D1, D2)
    if (D1 * D2 - n) % 2 or n * n >= D1 * D2:
        raise ValueError(f"n = {n} is outside S({D1}, {D2})")
    N = (D1 * D2 - n * n) // 4
    roles = []
    for p, e in factorize(N):
        eps = _epsilon_prime(D1, D2, p)
        role = "w" if eps == 1 else ("p" if e % 2 else "q")
        roles.append(PrimeRole(p, e, eps, role))
    if any(f.role == "p" for f in roles):
        value = 0
    else:
        value = 2 * math.prod(f.exponent + 1 for f in roles if f.role == "w")
    # second expression: twice the sum of eps(d) over all divisors d of N
    dsum = 0
    for exps in product(*(range(f.exponent + 1) for f in roles)):
        dsum += math.prod(f.eps ** k for f, k in zip(roles, exps))
    assert value == 2 * dsum, "product and divisor-sum forms of p(n) disagree"
    return PnProfile(n, N, value, tuple(roles), 2 * dsum)


@lru_cache(maxsize=4)
def _primes_upto(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _primes_for(P: int) -> np.ndarray:
    need = math.isqrt(P // 4) + 1
    size = 1 << max(10, need.bit_length())
    return _primes_upto(size)


def total_intersection_formula(D1: int, D2: int) -> int:
    """Int(D1, D2) as the sum of p(n) over S(D1, D2)."""
    _check_scope(D1, D2)
    P = D1 * D2
    if P >= 1 << 62:
        return sum(p_count(D1, D2, n).value for n in s_range(D1, D2))
    return int(_kernels.total_formula(D1, D2, _primes_for(P)))


def classwise_intersections(D1: int, D2: int) -> list[tuple[Pibqf, Pibqf, int]]:
    """Int(q1, q2) for every pair of narrow classes, in class-group order."""
    check_discriminant(D1)
    check_discriminant(D2)
    if D1 == D2:
        raise ScopeError("the class-sum total needs distinct discriminants")
    return [(q1, q2, intersection_number(q1, q2))
            for q1 in narrow_class_group(D1) for q2 in narrow_class_group(D2)]


def total_intersection_classes(D1: int, D2: int) -> int:
    """Int(D1, D2) as the sum of river intersection numbers over class pairs."""
    return sum(v for _, _, v in classwise_intersections(D1, D2))
