"""Batch studies: crossing loci along a closed geodesic, angle statistics,
the normalized total C(D1, D2), and naive-vs-fast timing.

Batches fan out over a thread pool sized by RIVERLINK_THREADS (0 or unset:
one worker per CPU) and results are merged in input order, so output never
depends on scheduling.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy import stats

from .arith import check_discriminant, is_discriminant, is_fundamental, regulator
from .errors import ScopeError, StrongEquivalenceError
from .forms import (Pibqf, UniModularMatrix, act, automorph, class_number,
                    narrow_class_group, river_walk, strongly_inequivalent)
from .geometry import IntersectionRecord, crossing_point, hyperbolic_distance
from .grosszagier import total_intersection_classes, total_intersection_formula
from .intersect import int_rs_fast, int_rs_naive, rs_meetings
from .river import river_of


def worker_count() -> int:
    raw = os.environ.get("RIVERLINK_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"RIVERLINK_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError(f"RIVERLINK_THREADS must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def ordered_map(fn: Callable, items: Iterable, workers: Optional[int] = None) -> list:
    """fn over items, results in input order."""
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fmt_float(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------- locus

def _moebius(m, z: complex) -> complex:
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


def _position(f: Pibqf, w: complex) -> float:
    """Signed arc-length coordinate of w on the geodesic of f, increasing toward its first root."""
    root = math.sqrt(f.disc)
    first = (-f.b + root) / (2 * f.a)
    second = (-f.b - root) / (2 * f.a)
    return math.log(abs(w - second) / abs(first - w))


def _apex(f: Pibqf) -> complex:
    return complex(-f.b / (2 * f.a), math.sqrt(f.disc) / (2 * abs(f.a)))


def geodesic_length(q: Pibqf, z: Optional[complex] = None) -> float:
    """Length of the closed geodesic of q, measured as d(z, gamma_q z)."""
    z = _apex(q) if z is None else z
    return hyperbolic_distance(z, _moebius(automorph(q).astuple(), z))


@dataclass(frozen=True)
class LocusSample:
    """A crossing on the closed geodesic of q, with the class it comes from."""

    partner_class: Pibqf
    record: IntersectionRecord
    arc_distance: float


class _Walk:
    """River forms of a class with the arc-length offset of each position."""

    def __init__(self, q: Pibqf):
        letters, forms, m = river_walk(q)
        self.letters = letters
        self.forms = forms
        self.bits = np.frombuffer(letters.encode(), np.uint8) == ord("R")
        self.bits = self.bits.astype(np.uint8)
        # offset[t]: position on l_q of a point w on l_{forms[t]} is _position(forms[t], w) + offset[t]
        offsets = np.empty(len(forms))
        w = _apex(forms[0])
        offsets[0] = _position(q, _moebius(m.astuple(), w)) - _position(forms[0], w)
        for t in range(len(forms) - 1):
            step = (1, 0, 1, 1) if letters[t] == "R" else (1, 1, 0, 1)
            w = _apex(forms[t + 1])
            offsets[t + 1] = offsets[t] + _position(forms[t], _moebius(step, w)) - _position(forms[t + 1], w)
        self.offsets = offsets


def _same_flow_pairs(a: _Walk, b: _Walk) -> list[tuple[int, int]]:
    # RS meetings of (a, b) plus RS meetings of (b, a); both realized at the next positions
    m, n = len(a.forms), len(b.forms)
    out = []
    i, j, _ = rs_meetings(a.bits, b.bits)
    out.extend(((int(s) + 1) % m, (int(t) + 1) % n) for s, t in zip(i, j))
    j, i, _ = rs_meetings(b.bits, a.bits)
    out.extend(((int(s) + 1) % m, (int(t) + 1) % n) for s, t in zip(i, j))
    return out


def intersection_locus(q: Pibqf, D: int, base: Optional[complex] = None) -> list[LocusSample]:
    """Every crossing of the closed geodesic of q with those of discriminant D."""
    check_discriminant(D)
    classes = narrow_class_group(D)
    if any(not strongly_inequivalent(q, c) for c in classes):
        raise StrongEquivalenceError(f"{q} is not strongly inequivalent to every class of {D}")
    walk = _Walk(q)
    length = geodesic_length(q)
    start = 0.0 if base is None else _position(q, base)

    def one_class(c: Pibqf) -> list[LocusSample]:
        out = []
        for partner, negate in ((c, False), (-c, True)):
            other = _Walk(partner)
            for t, u in _same_flow_pairs(walk, other):
                f = walk.forms[t]
                g = -other.forms[u] if negate else other.forms[u]
                rec = crossing_point(f, g)
                arc = (_position(f, rec.point) + walk.offsets[t] - start) % length
                if arc >= length:
                    arc = 0.0
                out.append(LocusSample(c, IntersectionRecord(
                    rec.bdelta, rec.sign, rec.point_form, rec.point, rec.angle, arc), arc))
        out.sort(key=lambda s: s.arc_distance)
        return out

    samples: list[LocusSample] = []
    for chunk in ordered_map(one_class, classes):
        samples.extend(chunk)
    return samples


# ---------------------------------------------------------------- angles

@dataclass(frozen=True)
class HistogramBin:
    lo: float
    hi: float
    mass: float

    @property
    def density(self) -> float:
        return self.mass / (self.hi - self.lo)


def _angles(samples) -> np.ndarray:
    return np.array([s.record.angle if isinstance(s, LocusSample) else float(s) for s in samples],
                    dtype=float)


def angle_histogram(samples, bins: int) -> list[HistogramBin]:
    """Equal-width bins over [0, pi]; masses sum to 1."""
    if not isinstance(bins, int) or bins < 1:
        raise ValueError(f"bins must be a positive integer, got {bins}")
    angles = _angles(samples)
    if angles.size == 0:
        return []
    counts, edges = np.histogram(angles, bins=bins, range=(0.0, math.pi))
    total = counts.sum()
    return [HistogramBin(float(edges[k]), float(edges[k + 1]), counts[k] / total) for k in range(bins)]


def half_sine_ks(samples) -> float:
    """Kolmogorov-Smirnov distance from the density sin(x)/2 on [0, pi]."""
    angles = _angles(samples)
    return float(stats.kstest(angles, lambda x: (1 - np.cos(x)) / 2).statistic)


# ---------------------------------------------------------------- C statistic

@dataclass(frozen=True)
class CStat:
    """Int(D1, D2) normalized by class numbers and regulators."""

    d1: int
    d2: int
    int_total: int
    h1: int
    h2: int
    r1: float
    r2: float

    @property
    def c(self) -> float:
        return self.int_total / (self.h1 * self.h2 * self.r1 * self.r2)


def c_statistic(D1: int, D2: int, halved_regulator: bool = True) -> CStat:
    """C(D1, D2); by default the regulator is log((T + U sqrt D) / 2)."""
    try:
        total = total_intersection_formula(D1, D2)
    except ScopeError:
        total = total_intersection_classes(D1, D2)
    return CStat(D1, D2, total, class_number(D1), class_number(D2),
                 regulator(D1, halved_regulator), regulator(D2, halved_regulator))


def fundamental_discriminants(lo: int, hi: int) -> list[int]:
    return [d for d in range(max(lo, 5), hi + 1) if is_fundamental(d)]


def sample_coprime_pairs(range1: tuple[int, int], range2: tuple[int, int], trials: int,
                         seed: int) -> list[tuple[int, int]]:
    """Seeded uniform draws of distinct coprime fundamental discriminant pairs."""
    f1 = fundamental_discriminants(*range1)
    f2 = fundamental_discriminants(*range2)
    if not f1 or not f2:
        raise ValueError("a discriminant range contains no fundamental discriminant")
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < trials:
        a = f1[int(rng.integers(len(f1)))]
        b = f2[int(rng.integers(len(f2)))]
        if a != b and math.gcd(a, b) == 1:
            pairs.append((a, b))
    return pairs


def c_statistic_batch(range1: tuple[int, int], range2: tuple[int, int], trials: int, seed: int,
                      halved_regulator: bool = True) -> list[CStat]:
    pairs = sample_coprime_pairs(range1, range2, trials, seed)
    return ordered_map(lambda p: c_statistic(p[0], p[1], halved_regulator), pairs)


# ---------------------------------------------------------------- benchmark

def valid_discriminants(lo: int, hi: int) -> list[int]:
    return [d for d in range(max(lo, 5), hi + 1) if is_discriminant(d)]


def random_form(rng: np.random.Generator, discs: Sequence[int]) -> Pibqf:
    """A uniformly random class of a uniformly random discriminant from ``discs``."""
    D = discs[int(rng.integers(len(discs)))]
    classes = narrow_class_group(D)
    return classes[int(rng.integers(len(classes)))]


def random_form_pairs(range1: tuple[int, int], range2: tuple[int, int], trials: int,
                      seed: int) -> list[tuple[Pibqf, Pibqf]]:
    """Seeded strongly inequivalent form pairs with discriminants in the two ranges."""
    d1, d2 = valid_discriminants(*range1), valid_discriminants(*range2)
    if not d1 or not d2:
        raise ValueError("empty discriminant range")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < trials:
        q1, q2 = random_form(rng, d1), random_form(rng, d2)
        if strongly_inequivalent(q1, q2):
            out.append((q1, q2))
    return out


@dataclass(frozen=True)
class BenchRow:
    d1_lo: int
    d1_hi: int
    d2_lo: int
    d2_hi: int
    p1_avg: float
    p2_avg: float
    intrs_avg: float
    t_river_ms: float
    t_naive_ms: float
    t_fast_ms: float

    @property
    def speedup(self) -> float:
        return self.t_naive_ms / self.t_fast_ms if self.t_fast_ms > 0 else math.inf


def bench_compare(range1: tuple[int, int], range2: tuple[int, int], trials: int, seed: int) -> BenchRow:
    """Mean wall time of the two Int^RS algorithms on precomputed rivers."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    pairs = random_form_pairs(range1, range2, trials, seed)
    t0 = time.perf_counter()
    rivers = [(river_of(a), river_of(b)) for a, b in pairs]
    t_river = time.perf_counter() - t0
    int_rs_naive(*rivers[0]), int_rs_fast(*rivers[0])   # compile outside the clock
    naive = fast = 0.0
    values = []
    for r1, r2 in rivers:
        t0 = time.perf_counter()
        v1 = int_rs_naive(r1, r2)
        naive += time.perf_counter() - t0
        t0 = time.perf_counter()
        v2 = int_rs_fast(r1, r2)
        fast += time.perf_counter() - t0
        assert v1 == v2, "naive and fast Int^RS disagree"
        values.append(v1)
    k = len(rivers)
    return BenchRow(range1[0], range1[1], range2[0], range2[1],
                    sum(len(a) for a, _ in rivers) / k, sum(len(b) for _, b in rivers) / k,
                    sum(values) / k, 1000 * t_river / k, 1000 * naive / k, 1000 * fast / k)


# ---------------------------------------------------------------- CSV

LOCUS_HEADER = ["class_rep", "bdelta", "sign", "re", "im", "angle", "arc_distance"]
HISTOGRAM_HEADER = ["bin_lo", "bin_hi", "mass"]
CSTAT_HEADER = ["d1", "d2", "int", "h1", "h2", "r1", "r2", "c"]
BENCH_HEADER = ["d1_lo", "d1_hi", "d2_lo", "d2_hi", "p1_avg", "p2_avg", "intrs_avg",
                "t_river_ms", "t_naive_ms", "t_fast_ms"]


def locus_rows(samples: Iterable[LocusSample]) -> list[list]:
    return [[str(s.partner_class), s.record.bdelta, s.record.sign, fmt_float(s.record.point.real),
             fmt_float(s.record.point.imag), fmt_float(s.record.angle), fmt_float(s.arc_distance)]
            for s in samples]


def histogram_rows(hist: Iterable[HistogramBin]) -> list[list]:
    return [[fmt_float(b.lo), fmt_float(b.hi), fmt_float(b.mass)] for b in hist]


def cstat_rows(items: Iterable[CStat]) -> list[list]:
    return [[s.d1, s.d2, s.int_total, s.h1, s.h2, fmt_float(s.r1), fmt_float(s.r2), fmt_float(s.c)]
            for s in items]


def bench_rows(items: Iterable[BenchRow]) -> list[list]:
    return [[b.d1_lo, b.d1_hi, b.d2_lo, b.d2_hi, fmt_float(b.p1_avg), fmt_float(b.p2_avg),
             fmt_float(b.intrs_avg), fmt_float(b.t_river_ms), fmt_float(b.t_naive_ms),
             fmt_float(b.t_fast_ms)] for b in items]


def to_csv(header: list[str], rows: Iterable[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()
