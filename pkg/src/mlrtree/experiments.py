"""Empirical measurements behind the trend properties: violations, bucket sizes, space, I/O."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .core import GridParams, Point, ThreeSidedQuery, ingest
from .dynamic import DynamicConfig, DynamicMlr
from .iomodel import IoConfig, blockify, traced_query
from .layered import LayerConfig, LayeredMlr
from .mlr import StaticMlr
from .testkit import Distribution, SmoothSpec, Uniform, Zipf, gen_points, oracle_scan


# -- violations ------------------------------------------------------------

@dataclass
class ViolationTrend:
    ns: List[int]
    seeds: int
    mean_per_epoch: Dict[int, float]
    per_n_ratio: Dict[int, float]          # mean_per_epoch / n
    c: float                               # smallest c with mean <= c ln n at every n
    total_violations: Dict[int, float]
    epochs: Dict[int, float]

    @property
    def ratio_strictly_decreasing(self) -> bool:
        r = [self.per_n_ratio[n] for n in self.ns]
        return all(a > b for a, b in zip(r, r[1:]))

    @property
    def log_bound_holds(self) -> bool:
        return all(self.mean_per_epoch[n] <= self.c * math.log(n) + 1e-12 for n in self.ns)


def insertion_stream(n: int, m: int, seed: int, s: float = 1.2, x_base: str = "piecewise",
                     x_dist: Optional[Distribution] = None,
                     y_dist: Optional[Distribution] = None) -> tuple:
    """``n`` points with iid smooth x and iid zipf y; ties broken by arrival order.

    Returns ``(points, grid)`` on the expanded grid, where a later copy of a
    value sorts above every earlier copy (so a repeated minimum is never a
    strict new minimum).  ``x_dist``/``y_dist`` override the defaults.
    """
    rng = np.random.default_rng(seed)
    xs = (x_dist or SmoothSpec(x_base)).sample(rng, n, m)
    ys = (y_dist or Zipf(s)).sample(rng, n, m)
    pts, g, _ = ingest(zip(xs.tolist(), ys.tolist()), GridParams(m), mode="perturb")
    return pts, g


def violation_run(n_max: int, checkpoints: Sequence[int], seed: int, m: int = 1 << 20,
                  s: float = 1.2, r: float = 0.5, x_base: str = "piecewise",
                  x_dist: Optional[Distribution] = None,
                  y_dist: Optional[Distribution] = None) -> Dict[int, tuple]:
    """Insert a stream into an empty dynamic index; (violations, epochs) at each checkpoint."""
    pts, g = insertion_stream(n_max, m, seed, s, x_base, x_dist, y_dist)
    d = DynamicMlr(g, [], DynamicConfig(r=r, materialize="lazy", sparse_locator=True))
    want = set(checkpoints)
    out = {}
    for i, p in enumerate(pts, 1):
        d.insert(p)
        if i in want:
            v = d.violation_stats()
            out[i] = (sum(v["archived"]) + v["current"], len(v["archived"]) + 1)
    return out


def violation_trend(ns: Sequence[int] = tuple(1 << e for e in range(12, 17)), seeds: int = 20,
                    m: int = 1 << 20, s: float = 1.2, r: float = 0.5,
                    x_base: str = "piecewise") -> ViolationTrend:
    ns = sorted(ns)
    per_epoch = {n: [] for n in ns}
    totals = {n: [] for n in ns}
    epochs = {n: [] for n in ns}
    for seed in range(seeds):
        run = violation_run(ns[-1], ns, seed, m, s, r, x_base)
        for n in ns:
            v, e = run[n]
            per_epoch[n].append(v / e)
            totals[n].append(v)
            epochs[n].append(e)
    mean = {n: statistics.fmean(per_epoch[n]) for n in ns}
    c = max(mean[n] / math.log(n) for n in ns)
    return ViolationTrend(list(ns), seeds, mean, {n: mean[n] / n for n in ns}, c,
                          {n: statistics.fmean(totals[n]) for n in ns},
                          {n: statistics.fmean(epochs[n]) for n in ns})


def adversarial_violations(n: int, m: int) -> int:
    """Insert ``n`` points with strictly decreasing y into one non-empty bucket.

    Each one undercuts the bucket minimum, so all ``n`` inserts violate.
    """
    seed_point = Point(m, m)
    d = DynamicMlr(GridParams(m), [seed_point],
                   DynamicConfig(materialize="lazy", auto_rebuild=False, t2_target=4 * (n + 1)))
    return sum(d.insert(Point(i + 1, m - 1 - i)).violating for i in range(n))


# -- bucket sizes ----------------------------------------------------------

@dataclass
class BucketReport:
    n: int
    target: int
    sizes: List[int]

    @property
    def fraction_within(self) -> float:
        lo, hi = self.target / 8, 8 * self.target
        return sum(lo <= z <= hi for z in self.sizes) / len(self.sizes)


def bucket_concentration(ns: Sequence[int] = tuple(1 << e for e in range(12, 17)),
                         m: int = 1 << 20, seed: int = 0,
                         x_base: str = "piecewise") -> List[BucketReport]:
    out = []
    for n in ns:
        pts = gen_points(n, GridParams(m), SmoothSpec(x_base), Uniform(), seed + n)
        s = LayeredMlr(pts, GridParams(m), LayerConfig(bucketing="range", sparse_locator=True))
        out.append(BucketReport(n, s.t2_target, [grp.size for grp in s.groups]))
    return out


# -- space -----------------------------------------------------------------

def r_squared(x: np.ndarray, y: np.ndarray) -> float:
    a, c = np.polyfit(x, y, 1)
    resid = y - (a * x + c)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return 1.0 - float(np.sum(resid ** 2)) / ss_tot


def sse(x: np.ndarray, y: np.ndarray) -> float:
    a, c = np.polyfit(x, y, 1)
    return float(np.sum((y - (a * x + c)) ** 2))


@dataclass
class SpaceReport:
    ns: List[int]
    layered: List[int]
    static: List[int]
    layered_r2: float
    static_sse_nlog2n: float
    static_sse_linear: float
    per_point: Dict[int, float] = field(default_factory=dict)

    @property
    def static_prefers_nlog2n(self) -> bool:
        return self.static_sse_nlog2n < self.static_sse_linear


def space_scaling(ns: Sequence[int] = tuple(1 << e for e in range(8, 14)), m: int = 1 << 16,
                  seed: int = 0) -> SpaceReport:
    lay, sta = [], []
    for n in ns:
        pts = gen_points(n, GridParams(m), Uniform(), Uniform(), seed + n)
        lay.append(LayeredMlr(pts, GridParams(m), LayerConfig(fallback_below=0)).aux_entries())
        sta.append(StaticMlr(pts, GridParams(m)).entry_count())
    x = np.asarray(ns, dtype=float)
    ly, sy = np.asarray(lay, dtype=float), np.asarray(sta, dtype=float)
    nlog2 = x * np.log2(x) ** 2
    return SpaceReport(list(ns), lay, sta, r_squared(x, ly), sse(nlog2, sy), sse(x, sy),
                       {n: lay[i] / n for i, n in enumerate(ns)})


# -- I/O -------------------------------------------------------------------

def correlated_points(n: int, m: int, seed: int, noise: int = 100) -> List[Point]:
    """Points near the rising diagonal, which gives large skylines.

    y is ``x + noise`` replaced by its rank among the x values, so y stays
    distinct and on the grid.
    """
    rng = np.random.default_rng(seed)
    xs = np.sort(rng.choice(np.arange(1, m + 1), size=n, replace=False))
    keys = xs + rng.integers(-noise, noise + 1, size=n)
    ys = xs[np.argsort(np.argsort(keys, kind="stable"), kind="stable")]
    return [Point(x, y) for x, y in zip(xs.tolist(), ys.tolist())]


@dataclass
class IoTrend:
    structure: str
    ratios: List[float]
    pairs: List[tuple]

    @property
    def median(self) -> float:
        return statistics.median(self.ratios)


def io_trend(structure: str = "static", n: int = 1 << 14, m: int = 1 << 20, pairs: int = 50,
             cfg: IoConfig = IoConfig(64, 2048), seed: int = 0,
             t_range: tuple = (16, 48)) -> IoTrend:
    """Cold-cache transfers of query pairs whose answers have sizes t and 2t."""
    pts = correlated_points(n, m, seed)
    g = GridParams(m)
    s = StaticMlr(pts, g) if structure == "static" else LayeredMlr(pts, g)
    bm = blockify(s, cfg)
    full = oracle_scan(pts, ThreeSidedQuery(1, m, m))
    rng = np.random.default_rng(seed + 1)
    ratios, info = [], []
    for _ in range(pairs):
        t = int(rng.integers(t_range[0], t_range[1] + 1))
        i = int(rng.integers(0, len(full) - 2 * t))
        b = full[i].x
        q1 = ThreeSidedQuery(full[i + t - 1].x, b, m)
        q2 = ThreeSidedQuery(full[i + 2 * t - 1].x, b, m)
        a1, s1 = traced_query(bm, q1)
        a2, s2 = traced_query(bm, q2)
        ratios.append(s2.transfers / s1.transfers)
        info.append((a1.t, a2.t, s1.transfers, s2.transfers))
    return IoTrend(structure, ratios, info)
