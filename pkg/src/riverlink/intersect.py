"""Combinatorial intersection numbers of closed geodesics, read off rivers.

Int^RS counts meetings where the first river leaves a shared stretch to the
right of a point where it entered from the left of the second river; the
other three behaviours reduce to it by swapping or negating the forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import StrongEquivalenceError
from .forms import Pibqf, strongly_inequivalent
from .river import RiverSequence, river_of, river_reverse


@dataclass(frozen=True)
class IntersectionComponents:
    """Counts of the four crossing behaviours RS, RO, LS, LO."""

    rs: int
    ro: int
    ls: int
    lo: int

    @property
    def total(self) -> int:
        return self.rs + self.ro + self.ls + self.lo

    @property
    def signed(self) -> int:
        return self.rs + self.ro - self.ls - self.lo


def _bits(r) -> np.ndarray:
    if isinstance(r, RiverSequence):
        return r.bits
    if isinstance(r, str):
        return RiverSequence(r).bits
    return np.ascontiguousarray(r, dtype=np.uint8)


def _checked(value: int, r1, r2) -> int:
    if value < 0:
        raise StrongEquivalenceError(f"rivers {r1} and {r2} are cyclic shifts of each other")
    return int(value)


def int_rs_naive(r1, r2) -> int:
    """Int^RS by the direct scan over all (i, j) start pairs."""
    return _checked(_kernels.rs_naive(_bits(r1), _bits(r2)), r1, r2)


def int_rs_fast(r1, r2) -> int:
    """Int^RS by refining index sets of shared subwords; same value as the scan."""
    return _checked(_kernels.rs_fast(_bits(r1), _bits(r2)), r1, r2)


def rs_meetings(r1, r2) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Positions (i, j) and exit offsets k of every RS meeting of two rivers."""
    i, j, k, ok = _kernels.rs_pairs(_bits(r1), _bits(r2))
    if not ok:
        raise StrongEquivalenceError(f"rivers {r1} and {r2} are cyclic shifts of each other")
    return i, j, k


def _require_inequivalent(q1: Pibqf, q2: Pibqf) -> None:
    if not strongly_inequivalent(q1, q2):
        raise StrongEquivalenceError(f"{q1} and {q2} are not strongly inequivalent")


def components(q1: Pibqf, q2: Pibqf, fast: bool = True) -> IntersectionComponents:
    """All four behaviour counts, each computed by its own RS reduction."""
    _require_inequivalent(q1, q2)
    count = int_rs_fast if fast else int_rs_naive
    r1, r2 = river_of(q1), river_of(q2)
    rs = count(r1, r2)
    ls = count(r2, r1)                  # Int^LS(q1,q2) = Int^RS(q2,q1)
    ro = count(river_reverse(r2), r1)   # Int^RO(q1,q2) = Int^RS(-q2,q1)
    lo = count(r1, river_reverse(r2))   # Int^LO(q1,q2) = Int^RS(q1,-q2)
    return IntersectionComponents(rs, ro, ls, lo)


def intersection_number(q1: Pibqf, q2: Pibqf, fast: bool = True) -> int:
    """Unweighted intersection number 2 (Int^RS + Int^RO)."""
    _require_inequivalent(q1, q2)
    count = int_rs_fast if fast else int_rs_naive
    r1, r2 = river_of(q1), river_of(q2)
    return 2 * (count(r1, r2) + count(river_reverse(r2), r1))
