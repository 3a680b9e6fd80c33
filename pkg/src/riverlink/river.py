"""River sequences of Conway topographs.

A river is stored as a word over {R, L} (R = 1, L = 0) at its minimal period.
Words are compared up to rotation by storing the rotation that is
lexicographically least when R sorts before L; this is the rotation that
starts with the longest block of R's, which is how rivers are usually printed
(RLL, RRRLLRL, R^n L^n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .arith import cf_quadratic
from .forms import (Pibqf, UniModularMatrix, _mul, river_walk)

_TO_KEY = str.maketrans("RL", "ab")


def _least_rotation(s: str) -> int:
    """Booth's algorithm: start index of the least rotation of s."""
    n = len(s)
    ss = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = ss[j]
        i = f[j - k - 1]
        while i != -1 and sj != ss[k + i + 1]:
            if sj < ss[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != ss[k + i + 1]:
            if sj < ss[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def _primitive_root(word: str) -> str:
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def canonical_word(word: str) -> str:
    word = _primitive_root(word)
    k = _least_rotation(word.translate(_TO_KEY))
    return word[k:] + word[:k]


@dataclass(frozen=True)
class RiverSequence:
    """Cyclic river word over {R, L}, canonical rotation, minimal period."""

    word: str
    _raw: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if self._raw:
            return
        w = self.word.upper()
        if not w or set(w) - {"R", "L"}:
            raise ValueError(f"river words are nonempty strings over R/L, got {self.word!r}")
        if "R" not in w or "L" not in w:
            raise ValueError(f"a river contains at least one R and one L, got {self.word!r}")
        object.__setattr__(self, "word", canonical_word(w))

    @classmethod
    def from_bits(cls, bits) -> "RiverSequence":
        return cls("".join("R" if b else "L" for b in bits))

    @property
    def period(self) -> int:
        return len(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return self.word

    @cached_property
    def bits(self) -> np.ndarray:
        """The word as a uint8 array with R = 1, L = 0."""
        return (np.frombuffer(self.word.encode(), dtype=np.uint8) == ord("R")).astype(np.uint8)


def river_from_cf(preperiod, period) -> str:
    """Parity run-length word of a continued fraction over its smallest even period."""
    s1 = len(preperiod)
    if len(period) % 2:
        period = tuple(period) * 2
    return "".join(("R" if (s1 + i) % 2 else "L") * a for i, a in enumerate(period))


def river_of(q: Pibqf) -> RiverSequence:
    """River of q's class, read off the continued fraction of its first root."""
    cf = cf_quadratic(-q.b, 2 * q.a, q.disc)
    return RiverSequence(river_from_cf(cf.preperiod, cf.period))


def river_automorph(seq: RiverSequence, anchor: int = 0) -> UniModularMatrix:
    """Product of the R/L turn matrices over one period, from rotation ``anchor``."""
    w = seq.word
    anchor %= len(w)
    m = (1, 0, 0, 1)
    for ch in w[anchor:] + w[:anchor]:
        m = _mul(m, (1, 0, 1, 1) if ch == "R" else (1, 1, 0, 1))
    return UniModularMatrix(*m)


def river_reverse(seq: RiverSequence) -> RiverSequence:
    """River of the reciprocal class: swap R and L, then reverse."""
    return RiverSequence(seq.word.translate(str.maketrans("RL", "LR"))[::-1])


def is_reciprocal_river(seq: RiverSequence) -> bool:
    return seq == river_reverse(seq)


def river_forms(q: Pibqf) -> list[Pibqf]:
    """Flow-oriented forms (A > 0 > C) along one river period of q's class."""
    return river_walk(q)[1]
