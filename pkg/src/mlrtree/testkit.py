"""Brute-force oracles, workload generators and the predecessor-reduction harness."""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import (Counters, GridParams, MlrError, Point, Semantics, SkylineAnswer,
                   ThreeSidedQuery, dominates, in_range, normalize)


# -- oracles ---------------------------------------------------------------

def oracle_pairwise(points: Iterable[Point], q: ThreeSidedQuery) -> List[Point]:
    """Points in range that no other point in range dominates, by decreasing x."""
    inside = [p for p in points if in_range(p, q)]
    sky = [p for p in inside if not any(dominates(o, p) for o in inside)]
    return sorted(sky, key=lambda p: -p.x)


def oracle_scan(points: Iterable[Point], q: ThreeSidedQuery) -> List[Point]:
    """Sweep by decreasing x keeping the smallest y seen so far."""
    inside = sorted((p for p in points if in_range(p, q)), key=lambda p: -p.x)
    out = []
    y_min = math.inf
    for p in inside:
        if p.y < y_min:
            out.append(p)
            y_min = p.y
    return out


def oracle_skyline(points: Iterable[Point], q: ThreeSidedQuery,
                   cross_check: bool = False) -> SkylineAnswer:
    """Exact skyline of ``points`` inside ``q``.

    With ``cross_check`` the pairwise-dominance oracle runs too and any
    disagreement raises ``AssertionError``.
    """
    pts = list(points)
    out = oracle_scan(pts, q)
    if cross_check:
        other = oracle_pairwise(pts, q)
        if other != out:
            raise AssertionError(f"oracles disagree on {q}: scan {out} pairwise {other}")
    return SkylineAnswer(out, Counters())


# -- distributions -----------------------------------------------------------

@lru_cache(maxsize=32)
def _cdf(dist: "Distribution", m: int) -> np.ndarray:
    c = np.cumsum(dist.pmf(m))
    return c / c[-1]


class Distribution:
    """A discrete distribution over ``1..M`` given by its probability vector."""

    name = "dist"

    def pmf(self, m: int) -> np.ndarray:
        raise NotImplementedError

    def cdf(self, m: int) -> np.ndarray:
        return _cdf(self, m)

    def sample(self, rng: np.random.Generator, size: int, m: int) -> np.ndarray:
        u = rng.random(size)
        return np.searchsorted(self.cdf(m), u, side="right") + 1


@dataclass(frozen=True)
class Uniform(Distribution):
    name = "uniform"

    def pmf(self, m: int) -> np.ndarray:
        return np.full(m, 1.0 / m)

    def sample(self, rng, size, m):
        return rng.integers(1, m + 1, size)


@dataclass(frozen=True)
class Piecewise(Distribution):
    """Piecewise-constant density: the universe is cut into equal pieces with relative weights."""

    weights: Tuple[float, ...] = (1.0, 3.0, 2.0, 4.0)
    name = "piecewise"

    def pmf(self, m: int) -> np.ndarray:
        w = np.asarray(self.weights, dtype=float)
        if (w <= 0).any():
            raise MlrError("piecewise weights must be positive")
        piece = np.minimum((np.arange(m) * len(w)) // m, len(w) - 1)
        p = w[piece]
        return p / p.sum()


@dataclass(frozen=True)
class Zipf(Distribution):
    """``Pr[v] proportional to v**-s`` on ``1..M``."""

    s: float = 1.2
    name = "zipf"

    def pmf(self, m: int) -> np.ndarray:
        p = np.arange(1, m + 1, dtype=float) ** -self.s
        return p / p.sum()


def harmonic(m: int, s: float) -> float:
    """Generalized harmonic number ``sum_{v=1..m} v**-s``."""
    return float(np.sum(np.arange(1, m + 1, dtype=float) ** -s))


@dataclass(frozen=True)
class ZipfSpec:
    s: float
    m: int

    def __post_init__(self):
        if self.s <= 0:
            raise MlrError(f"zipf exponent must be positive, got {self.s}")

    @property
    def normalizer(self) -> float:
        return harmonic(self.m, self.s)

    @property
    def alpha(self) -> float:
        """``Pr[y > 1]``."""
        return 1.0 - 1.0 / self.normalizer

    @property
    def distribution(self) -> Zipf:
        return Zipf(self.s)


BASES = ("uniform", "piecewise", "zipf-marginal")


@dataclass(frozen=True)
class SmoothSpec(Distribution):
    """A base density with the smoothness parameters it is claimed to satisfy.

    ``f1(nu) = nu**a1`` subdivisions, ``f2(nu) = nu**a2``, constant ``beta``:
    for ``c1 < c2 < c3`` the mass of ``[c2 - floor((c3-c1)/f1(nu)), c2]``
    inside ``[c1, c3]`` stays below ``beta * f2(nu) / nu``.  The zipf
    marginal has a point mass at 1, so it only carries the trivial
    ``f2(nu) = nu``.
    """

    base: str = "uniform"
    a1: float = 0.5
    a2: float = 0.6
    beta: float = 4.0
    weights: Tuple[float, ...] = (1.0, 3.0, 2.0, 4.0)
    s: float = 1.2

    def __post_init__(self):
        if self.base not in BASES:
            raise MlrError(f"unknown base density {self.base!r}; expected one of {BASES}")
        if self.beta < 1:
            raise MlrError("beta must be >= 1")

    @property
    def name(self) -> str:
        return f"smooth-{self.base}"

    def f1(self, nu: float) -> float:
        return nu ** self.a1

    def f2(self, nu: float) -> float:
        return nu if self.base == "zipf-marginal" else nu ** self.a2

    def base_dist(self) -> Distribution:
        if self.base == "uniform":
            return Uniform()
        if self.base == "piecewise":
            return Piecewise(self.weights)
        return Zipf(self.s)

    def pmf(self, m: int) -> np.ndarray:
        return self.base_dist().pmf(m)

    def sample(self, rng, size, m):
        return self.base_dist().sample(rng, size, m)


@dataclass
class SmoothnessReport:
    ok: bool
    checked: int
    worst_margin: float          # max over triples of (empirical - allowed)
    failures: List[tuple] = field(default_factory=list)


def smoothness_check(spec: SmoothSpec, m: int, n: int, samples: np.ndarray,
                     rng: np.random.Generator, triples: int = 200) -> SmoothnessReport:
    """Check the smoothness inequality on random triples against a finite sample.

    For ``nu`` in ``{n/4, n/2, n}`` random ``c1 < c2 < c3`` are drawn with
    ``c3 - c1 + 1 >= nu`` (shorter intervals hold too few keys for any
    distribution to qualify).  The empirical conditional frequency may
    exceed ``beta * f2(nu) / nu`` by at most three standard errors.
    """
    vals = np.sort(np.asarray(samples))
    worst = -math.inf
    fails = []
    checked = 0
    for nu in sorted({max(1, n // 4), max(1, n // 2), max(1, n)}):
        bound = spec.beta * spec.f2(nu) / nu
        span_min = min(nu, m) - 1
        for _ in range(triples):
            c1 = int(rng.integers(1, m - span_min + 1))
            c3 = int(rng.integers(c1 + span_min, m + 1))
            if c3 - c1 < 2:
                continue
            c2 = int(rng.integers(c1 + 1, c3))
            w = int((c3 - c1) // spec.f1(nu))
            lo = max(c1, c2 - w)
            tot = np.searchsorted(vals, c3, "right") - np.searchsorted(vals, c1, "left")
            if tot == 0:
                continue
            hit = np.searchsorted(vals, c2, "right") - np.searchsorted(vals, lo, "left")
            freq = hit / tot
            slack = 3 * math.sqrt(max(bound * (1 - bound), 0.0) / tot) + 1.0 / tot
            margin = freq - bound - slack
            checked += 1
            worst = max(worst, freq - bound)
            if margin > 0:
                fails.append((nu, c1, c2, c3, freq, bound))
    return SmoothnessReport(not fails, checked, worst, fails)


def spec_from_name(name: str, s: float = 1.2) -> Distribution:
    """Distribution from a short token: uniform, piecewise, zipf, smooth, smooth-piecewise."""
    t = name.lower()
    if t == "uniform":
        return Uniform()
    if t == "piecewise":
        return Piecewise()
    if t == "zipf":
        return Zipf(s)
    if t in ("smooth", "smooth-uniform"):
        return SmoothSpec("uniform")
    if t == "smooth-piecewise":
        return SmoothSpec("piecewise")
    if t == "smooth-zipf":
        return SmoothSpec("zipf-marginal", s=s)
    raise MlrError(f"unknown distribution {name!r}")


# -- point generation -------------------------------------------------------

def distinct_draws(dist: Distribution, n: int, m: int, rng: np.random.Generator,
                   cap_factor: int = 100) -> np.ndarray:
    """``n`` distinct values from ``dist`` in draw order; rejection-resampling on repeats."""
    if n > m:
        raise MlrError(f"cannot draw {n} distinct values from [1,{m}]")
    seen = np.zeros(m + 2, dtype=bool)
    out = np.empty(n, dtype=np.int64)
    have = 0
    drawn = 0
    cap = cap_factor * max(n, 1)
    while have < n:
        if drawn >= cap:
            raise MlrError(f"gave up after {drawn} draws: only {have} of {n} distinct values")
        size = min(max(4 * (n - have), 4096), cap - drawn)
        batch = np.asarray(dist.sample(rng, size, m), dtype=np.int64)
        drawn += size
        _, first = np.unique(batch, return_index=True)
        first.sort()
        fresh = batch[first]
        fresh = fresh[~seen[fresh]][: n - have]
        seen[fresh] = True
        out[have:have + len(fresh)] = fresh
        have += len(fresh)
    return out


def gen_points(n: int, g: GridParams, x_spec: Distribution, y_spec: Distribution,
               seed: int) -> List[Point]:
    """``n`` points with distinct x and distinct y drawn independently per spec."""
    if n < 0:
        raise MlrError("n must be non-negative")
    if n > g.m:
        raise MlrError(f"n={n} exceeds the {g.m} distinct coordinates of the grid")
    if n == 0:
        return []
    rng = np.random.default_rng(seed)
    xs = distinct_draws(x_spec, n, g.m, rng)
    ys = distinct_draws(y_spec, n, g.m, rng)
    return [Point(int(x), int(y)) for x, y in zip(xs.tolist(), ys.tolist())]


# -- predecessor reduction ----------------------------------------------------

def reduction_check(values: Sequence[int], probes: Sequence[int], m: Optional[int] = None,
                    structure: str = "layered") -> bool:
    """Predecessor search answered by a skyline query on the diagonal set.

    The points ``(v, v)`` under MAX-X/MAX-Y preference are a chain: the one
    with the larger coordinate dominates.  Since the set is symmetric, the
    range ``y <= a`` selects the same points as ``x <= a``, which in
    canonical form is the 3-sided query ``[1, a] x (-inf, M]``.  The answer
    must be exactly the predecessor of ``a``, or empty.
    """
    from . import build_index

    vals = list(values)
    if any(vals[i] >= vals[i + 1] for i in range(len(vals) - 1)):
        raise MlrError("values must be strictly ascending")
    if not vals:
        return True     # nothing stored: every probe has no predecessor and no answer
    m = m or max(max(vals), max(probes, default=1))
    g = GridParams(m)
    sem = Semantics.MAX_X_MAX_Y
    pts = [normalize(Point(v, v), sem, g) for v in vals]
    idx = build_index(pts, g, structure)
    for a in probes:
        got = idx.query(ThreeSidedQuery(1, a, m)).points
        got = [normalize(p, sem, g) for p in got]
        i = bisect_right(vals, a)
        want = [Point(vals[i - 1], vals[i - 1])] if i else []
        if got != want:
            return False
    return True
