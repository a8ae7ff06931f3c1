"""Linear-space three-layer MLR-tree.

Points are cut, in x order, into microtrees of at most ``k`` points; runs of
consecutive microtrees form the layer-2 groups.  Each group carries an
:class:`~mlrtree.mlr.MlrTree` over the min-y representatives of its
microtrees, and one more :class:`~mlrtree.mlr.MlrTree` (layer 1) sits over
the group representatives.  A microtree answers "max-x point inside a
3-sided range" with three small predecessor searches and one lookup in the
shared ANS table, indexed by the microtree's y-rank permutation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .access import SmallSetPam
from .core import (Counters, GridParams, MlrError, Point, SkylineAnswer, ThreeSidedQuery,
                   check_distinct)
from .mlr import MlrTree, StaticMlr, complete_shape, make_locator

K_TAB = 7


# -- permutation labels ------------------------------------------------

def perm_label(ranks: Sequence[int], k: Optional[int] = None) -> int:
    """Lexicographic rank (1-based) of a permutation of ``1..len(ranks)``.

    With ``k > len(ranks)`` the sequence is padded with ``len+1 .. k``, the
    ranks of +inf sentinels appended after the real points.
    """
    return _perm_label(tuple(ranks), len(ranks) if k is None else k)


@lru_cache(maxsize=1 << 16)
def _perm_label(ranks: Tuple[int, ...], k: int) -> int:
    n = len(ranks)
    if sorted(ranks) != list(range(1, n + 1)):
        raise MlrError(f"not a permutation of 1..{n}: {list(ranks)}")
    if k < n:
        raise MlrError(f"permutation of length {n} exceeds capacity {k}")
    seq = ranks + tuple(range(n + 1, k + 1))
    label = 0
    for i, r in enumerate(seq):
        smaller = sum(1 for v in seq[i + 1:] if v < r)
        label += smaller * factorial(k - 1 - i)
    return label + 1


class AnsTable:
    """``ANS[label, pa, pb, pd]``: largest ``i`` with ``pa < i <= pb`` and ``alpha(i) <= pd``.

    Positions are 1-based; 0 means no qualifying point.  One byte per entry.
    """

    def __init__(self, k: int, k_tab: int = K_TAB):
        if not 1 <= k <= k_tab:
            raise MlrError(f"ANS capacity k={k} outside [1, {k_tab}]; "
                           "use the direct-scan fallback for larger microtrees")
        self.k = k
        alpha = np.array(list(permutations(range(1, k + 1))), dtype=np.int16)
        n_perm = alpha.shape[0]
        pos = np.arange(1, k + 1, dtype=np.int16)
        pd = np.arange(0, k + 1, dtype=np.int16)
        # cand[p, i, pd]: position i if point i is low enough, else 0
        cand = np.where(alpha[:, :, None] <= pd[None, None, :], pos[None, :, None], 0)
        best = np.zeros((n_perm, k + 1, k + 1), dtype=np.int16)
        best[:, 1:, :] = np.maximum.accumulate(cand, axis=1)
        pa = np.arange(0, k + 1, dtype=np.int16)
        table = np.where(best[:, None, :, :] > pa[None, :, None, None],
                         best[:, None, :, :], 0).astype(np.uint8)
        self.shape = table.shape
        self.flat = table.tobytes()
        self.stride = k + 1

    def __len__(self):
        return len(self.flat)

    def lookup(self, label: int, pa: int, pb: int, pd: int) -> int:
        s = self.stride
        return self.flat[(((label - 1) * s + pa) * s + pb) * s + pd]

    def as_array(self) -> np.ndarray:
        return np.frombuffer(self.flat, dtype=np.uint8).reshape(self.shape)


@lru_cache(maxsize=None)
def build_ans(k: int, k_tab: int = K_TAB) -> AnsTable:
    """Shared, cached ANS table for microtree capacity ``k``."""
    return AnsTable(k, k_tab)


def ans_scan(ranks: Sequence[int], pa: int, pb: int, pd: int) -> int:
    """Direct-scan answer for one (permutation, pa, pb, pd) cell."""
    for i in range(min(pb, len(ranks)), pa, -1):
        if ranks[i - 1] <= pd:
            return i
    return 0


# -- microtrees --------------------------------------------------------

class MicroTree:
    """At most ``k`` points in x order, with x/y predecessor searches and a permutation label."""

    __slots__ = ("points", "xs", "ys", "ranks", "label", "k", "x_pam", "y_pam", "rep",
                 "group", "leaf", "next", "prev", "wnode")

    def __init__(self, points: Sequence[Point], k: int, k_tab: int = K_TAB):
        self.group = None
        self.wnode = None
        self.leaf = -1
        self.next: Optional[MicroTree] = None
        self.prev: Optional[MicroTree] = None
        self.k = k
        self.reset(points, k_tab)

    def reset(self, points: Sequence[Point], k_tab: int = K_TAB) -> None:
        self.points = list(points)
        self.xs = [p.x for p in self.points]
        self.ys = sorted(p.y for p in self.points)
        rank = {y: i + 1 for i, y in enumerate(self.ys)}
        self.ranks = [rank[p.y] for p in self.points]
        n = len(self.points)
        self.label = perm_label(self.ranks, self.k) if n <= self.k <= k_tab else 0
        cap = max(n, 1)
        self.x_pam = SmallSetPam(self.xs, k_max=cap, check=False)
        self.y_pam = SmallSetPam(self.ys, k_max=cap, check=False)
        self.rep = min(self.points, key=lambda p: p.y) if n else None

    def __len__(self):
        return len(self.points)

    # the x-chain is dropped when pickling (deep recursion) and relinked by the owner
    def __getstate__(self):
        return {k: getattr(self, k) for k in self.__slots__ if k not in ("next", "prev")}

    def __setstate__(self, state):
        for k, v in state.items():
            setattr(self, k, v)
        self.next = self.prev = None

    @property
    def first(self) -> int:
        return self.xs[0]

    @property
    def last(self) -> int:
        return self.xs[-1]

    def slots(self) -> int:
        return max(len(self.points), 1)


def micro_best(m: MicroTree, a: Optional[int], b: Optional[int], d: int,
               ans: Optional[AnsTable], c: Counters, io=None) -> Optional[Point]:
    """Max-x point of ``m`` in ``[a, b] x (-inf, d]``; ``None`` bounds are not searched."""
    touch = io.touch if io is not None else None
    n = len(m.points)
    if a is None:
        pa = 0
    else:
        c.predecessor_queries += 1
        p = m.x_pam.predecessor(a - 1, touch)
        pa = 0 if p is None else p + 1
    if b is None:
        pb = n
    else:
        c.predecessor_queries += 1
        p = m.x_pam.predecessor(b, touch)
        pb = 0 if p is None else p + 1
    c.predecessor_queries += 1
    p = m.y_pam.predecessor(d, touch)
    pd = 0 if p is None else p + 1
    if ans is not None and m.label:
        pos = ans.lookup(m.label, pa, pb, pd)
    else:
        pos = ans_scan(m.ranks, pa, pb, pd)
    if io is not None:
        io.touch(m, 0)
        if pos:
            io.touch(m, pos - 1)
    return m.points[pos - 1] if pos else None


def micro_query(m: MicroTree, ans: Optional[AnsTable], q: ThreeSidedQuery,
                counters: Optional[Counters] = None) -> Optional[Point]:
    """Max-x point of ``m`` inside ``q``: three predecessor searches and one table lookup."""
    return micro_best(m, q.a, q.b, q.d, ans, counters if counters is not None else Counters())


# -- layered structure -------------------------------------------------

@dataclass
class LayerConfig:
    pam: str = "sorted"
    k_tab: int = K_TAB
    t2_target: Optional[int] = None
    k: Optional[int] = None
    bucketing: str = "count"   # "count" or "range"
    sparse_locator: bool = False
    fallback_below: int = 16


def layer_params(n: int, k_tab: int = K_TAB) -> Tuple[int, int]:
    """(layer-2 target size, microtree capacity k) for ``n`` points."""
    lg = math.log2(max(n, 2))
    t2 = max(4, min(math.ceil(lg * lg), max(n, 4)))
    llg = math.log2(lg) if lg > 1 else 0.0
    k = min(max(math.ceil(llg * llg), 2), k_tab)
    return t2, k


def chunk_sizes(n: int, target: int) -> List[int]:
    """Split ``n`` into ``round(n/target)`` near-equal parts (each within 2x of target)."""
    g = max(1, round(n / target))
    base, extra = divmod(n, g)
    return [base + (1 if i < extra else 0) for i in range(g)]


def capped_sizes(n: int, cap: int) -> List[int]:
    """Split ``n`` into the fewest near-equal parts of size <= cap."""
    g = max(1, -(-n // cap))
    base, extra = divmod(n, g)
    return [base + (1 if i < extra else 0) for i in range(g)]


def range_buckets(points: Sequence[Point], m: int, target: int) -> List[List[Point]]:
    """Halve the x-universe recursively until a cell holds <= target points.

    Cell bounds depend only on the universe, never on the stored points.
    """
    out: List[List[Point]] = []

    def rec(lo, hi, pts):
        if not pts:
            return
        if len(pts) <= target or lo == hi:
            out.append(pts)
            return
        mid = (lo + hi) // 2
        i = 0
        while i < len(pts) and pts[i].x <= mid:
            i += 1
        rec(lo, mid, pts[:i])
        rec(mid + 1, hi, pts[i:])

    rec(1, m, list(points))
    return out


def link_chain(micros: Sequence[MicroTree]) -> None:
    for i, m in enumerate(micros):
        m.prev = micros[i - 1] if i else None
        m.next = micros[i + 1] if i + 1 < len(micros) else None


class Group:
    """A layer-2 tree: consecutive microtrees plus an MLR core over their representatives."""

    __slots__ = ("micro", "tree", "rep", "t1_leaf", "size", "wb", "wnode", "dirty")

    def __init__(self, micro: List[MicroTree]):
        self.micro = micro
        self.tree: Optional[MlrTree] = None
        self.rep: Optional[Point] = None
        self.t1_leaf = -1
        self.size = sum(len(m) for m in micro)
        self.wb = None
        self.wnode = None
        self.dirty = True

    def refresh(self, pam: str, universe: int, shape=None) -> None:
        for i, m in enumerate(self.micro):
            m.group = self
            m.leaf = i
        reps = [m.rep for m in self.micro]
        self.rep = min(reps, key=lambda p: p.y)
        self.size = sum(len(m) for m in self.micro)
        self.tree = MlrTree(reps, shape or complete_shape(len(reps)), pam, universe)
        self.dirty = False


def _descend_group(g: Group, v: int, d: int, ans, c: Counters, io) -> Optional[Point]:
    li = g.tree.subtree_best(v, d, c, io)
    if li is None:
        return None
    return micro_best(g.micro[li], None, None, d, ans, c, io)


def find_max(s, a: int, b: int, d: int, c: Counters, io=None) -> Optional[Point]:
    """Max-x point inside ``[a, b] x (-inf, d]`` of a layered structure ``s``.

    ``s`` provides ``micro_pred(c, io)``, ``head``, ``t1``, ``groups`` and
    ``ans``.  Candidates are examined right to left: the microtree holding
    ``b``, the rest of its group, the layer-1 subtrees strictly between the
    two end groups, the rest of the left group, then the microtree holding
    ``a``.  At most eight predecessor searches.
    """
    ans = s.ans
    mb = s.micro_pred(b, io)
    if mb is None:
        return None
    ma = s.micro_pred(a, io)
    if ma is None:
        ma = s.head
    elif a > ma.last:
        ma = ma.next
    if ma is None:
        return None
    ga, gb = ma.group, mb.group
    if (ga.t1_leaf, ma.leaf) > (gb.t1_leaf, mb.leaf):
        return None
    if ma is mb:
        return micro_best(ma, a, b, d, ans, c, io)
    z = micro_best(mb, None, b, d, ans, c, io)
    if z is not None:
        return z
    if ga is gb:
        t = ga.tree
        _, tau = t.lca(ma.leaf, mb.leaf)
        v = t.sideways_best(ma.leaf, mb.leaf, tau + 1, d, c, io)
        if v is not None:
            return _descend_group(ga, v, d, ans, c, io)
    else:
        v = gb.tree.left_arrays[mb.leaf][0].best(d, c, io)
        if v is not None:
            return _descend_group(gb, v, d, ans, c, io)
        t1 = s.t1
        i, j = ga.t1_leaf, gb.t1_leaf
        _, tau = t1.lca(i, j)
        v = t1.sideways_best(i, j, tau + 1, d, c, io)
        if v is not None:
            gi = t1.subtree_best(v, d, c, io)
            g = s.groups[gi]
            return _descend_group(g, g.tree.root, d, ans, c, io)
        v = ga.tree.right_arrays[ma.leaf][0].best(d, c, io)
        if v is not None:
            return _descend_group(ga, v, d, ans, c, io)
    return micro_best(ma, a, None, d, ans, c, io)


def layered_query(s, q: ThreeSidedQuery, io=None) -> SkylineAnswer:
    c = Counters()
    out: List[Point] = []
    a, b, d = q.a, q.b, q.d
    if s.head is None:
        return SkylineAnswer(out, c)
    while a <= b and d >= 1:
        c.loop_iterations += 1
        z = find_max(s, a, b, d, c, io)
        if z is None:
            break
        out.append(z)
        b, d = z.x - 1, z.y - 1
    return SkylineAnswer(out, c)


class LayeredMlr:
    """Static three-layer MLR-tree."""

    structure = "layered"

    def __init__(self, points: Sequence[Point], g: GridParams,
                 cfg: Optional[LayerConfig] = None):
        cfg = cfg or LayerConfig()
        if not points:
            raise MlrError("empty input")
        for p in points:
            g.check_point(p)
        check_distinct(points)
        self.grid = g
        self.cfg = cfg
        pts = sorted(points)
        self.n = len(pts)
        t2_target, k = layer_params(self.n, cfg.k_tab)
        self.t2_target = cfg.t2_target or t2_target
        self.k = cfg.k or k
        self.fallback: Optional[StaticMlr] = None
        self.ans: Optional[AnsTable] = None
        self.groups: List[Group] = []
        self.micros: List[MicroTree] = []
        self.t1: Optional[MlrTree] = None
        self.head: Optional[MicroTree] = None
        if self.n < cfg.fallback_below:
            self.fallback = StaticMlr(pts, g, cfg.pam, cfg.sparse_locator)
            return
        self.ans = build_ans(self.k, cfg.k_tab) if self.k <= cfg.k_tab else None
        if cfg.bucketing == "range":
            buckets = range_buckets(pts, g.m, self.t2_target)
        elif cfg.bucketing == "count":
            buckets, i = [], 0
            for sz in chunk_sizes(self.n, self.t2_target):
                buckets.append(pts[i:i + sz])
                i += sz
        else:
            raise MlrError(f"unknown bucketing {cfg.bucketing!r}")
        for bucket in buckets:
            micro, i = [], 0
            for sz in capped_sizes(len(bucket), self.k):
                micro.append(MicroTree(bucket[i:i + sz], self.k, cfg.k_tab))
                i += sz
            grp = Group(micro)
            grp.refresh(cfg.pam, g.m)
            self.groups.append(grp)
            self.micros.extend(micro)
        link_chain(self.micros)
        self.head = self.micros[0]
        for i, grp in enumerate(self.groups):
            grp.t1_leaf = i
        self.t1 = MlrTree([grp.rep for grp in self.groups], None, cfg.pam, g.m)
        self.locator = make_locator([m.first for m in self.micros], g.m, cfg.sparse_locator)

    def __len__(self):
        return self.n

    def __setstate__(self, state):
        self.__dict__.update(state)
        link_chain(self.micros)

    @property
    def single_layer(self) -> bool:
        return self.fallback is not None

    def micro_pred(self, c: int, io=None) -> Optional[MicroTree]:
        i = self.locator.pred(c, io)
        return self.micros[i] if i >= 0 else None

    def query(self, q: ThreeSidedQuery, io=None) -> SkylineAnswer:
        q.validate(self.grid)
        if self.fallback is not None:
            return self.fallback.query(q, io)
        return layered_query(self, q, io)

    def points(self) -> List[Point]:
        if self.fallback is not None:
            return list(self.fallback.points)
        return [p for m in self.micros for p in m.points]

    def entry_counts(self) -> dict:
        if self.fallback is not None:
            return {"t1": self.fallback.entry_count(), "t2": 0, "t3": 0, "ans": 0,
                    "locator": self.fallback.locator.entry_count()}
        return {"t1": self.t1.entry_count(),
                "t2": sum(grp.tree.entry_count() for grp in self.groups),
                "t3": sum(len(m) for m in self.micros),
                "ans": len(self.ans) if self.ans is not None else 0,
                "locator": self.locator.entry_count()}

    def aux_entries(self) -> int:
        e = self.entry_counts()
        return e["t1"] + e["t2"] + e["t3"]

    def build_report(self) -> dict:
        e = self.entry_counts()
        return {"structure": "layered", "N": self.n, "M": self.grid.m, "pam": self.cfg.pam,
                "single_layer_fallback": self.single_layer,
                "H": (self.fallback.height if self.fallback is not None else self.t1.height),
                "t2_target": self.t2_target, "k": self.k,
                "layers": {"t1_leaves": len(self.groups), "t2_trees": len(self.groups),
                           "t3_trees": len(self.micros)},
                "t2_sizes": [grp.size for grp in self.groups],
                "ans_entries": e["ans"], "entries": e,
                "aux_per_point": round((e["t1"] + e["t2"] + e["t3"]) / max(self.n, 1), 4)}

    def audit(self) -> None:
        from .mlr import AuditError
        if self.fallback is not None:
            self.fallback.audit()
            return
        self.t1.audit()
        for i, grp in enumerate(self.groups):
            grp.tree.audit()
            want = min((p for m in grp.micro for p in m.points), key=lambda p: p.y)
            if grp.rep != want or self.t1.summaries[i] != want:
                raise AuditError(f"group {i}: representative {grp.rep} expected {want}")
            for m in grp.micro:
                if len(m) > self.k:
                    raise AuditError(f"microtree of size {len(m)} exceeds k={self.k}")
                if m.label and m.label != perm_label(m.ranks, self.k):
                    raise AuditError("stale permutation label")


def build_layered(points: Sequence[Point], g: GridParams,
                  cfg: Optional[LayerConfig] = None) -> LayeredMlr:
    return LayeredMlr(points, g, cfg)


def query_skyline_layered(s: LayeredMlr, q: ThreeSidedQuery) -> SkylineAnswer:
    return s.query(q)
