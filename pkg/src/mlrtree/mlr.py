"""Static non-linear-space MLR-tree.

:class:`MlrTree` is the shape-agnostic core: a binary tree whose leaves carry
summary points in x order.  Every internal node keeps ``q_v`` (its min-y
summary) and ``S_v`` (its leaf summaries in y order with a PAM and a
prefix-argmax over x).  Every leaf keeps, for each depth ``h``, the arrays of
``q_v`` for subtrees hanging left / right off its root path below depth
``h``.  :class:`StaticMlr` uses the core over single points; the layered and
dynamic indexes use it over representatives of lower layers.
"""
from __future__ import annotations

from bisect import insort
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .access import PrefixExtremum, SmallSetPam, SortedSeqPam, pam_build
from .core import (Counters, GridParams, MlrError, OffGridError,
                   Point, SkylineAnswer, ThreeSidedQuery, check_distinct)

Shape = Union[int, Tuple["Shape", "Shape"]]


class AuditError(AssertionError):
    pass


class NodeArray:
    """Summary points sorted by y, each tagged with a node or leaf reference.

    Used both for ``S_v`` (tags are leaf indices) and for the per-leaf side
    arrays (tags are node ids).
    """

    __slots__ = ("pts", "tags", "pam", "pe")

    def __init__(self, entries: Sequence[Tuple[Point, int]], pam_kind: str = "small",
                 universe: Optional[int] = None):
        self.pts = [e[0] for e in entries]
        self.tags = [e[1] for e in entries]
        ys = [p.y for p in self.pts]
        if pam_kind == "small":
            self.pam = SmallSetPam(ys, k_max=max(64, len(ys)), check=False)
        elif pam_kind == "sorted":
            self.pam = SortedSeqPam(ys, check=False)
        else:
            self.pam = pam_build(ys, pam_kind, universe)
        self.pe = PrefixExtremum([p.x for p in self.pts])

    def __len__(self):
        return len(self.pts)

    def best(self, d: int, counters: Counters, io=None):
        """Tag of the max-x entry with y <= d, or None (one predecessor call)."""
        counters.predecessor_queries += 1
        if io is None:
            p = self.pam.predecessor(d)
            if p is None:
                return None
            counters.rmq_queries += 1
            return self.tags[self.pe.prefix_argmax[p]]
        p = self.pam.predecessor(d, io.touch)
        if p is None:
            return None
        counters.rmq_queries += 1
        n = len(self.pts)
        io.touch(self, n + p)
        i = self.pe.prefix_argmax[p]
        io.touch(self, i)
        return self.tags[i]

    def slots(self) -> int:
        return 2 * len(self.pts)


_EMPTY = NodeArray([])


def complete_shape(n: int) -> Shape:
    """Left-complete binary tree over ``n`` leaves (heap shape, sentinels pruned)."""
    if n <= 0:
        raise MlrError("a tree needs at least one leaf")
    span = 1
    while span < n:
        span <<= 1

    def rec(lo, width):
        hi = min(lo + width, n)
        if hi - lo == 1:
            return lo
        half = width >> 1
        if lo + half >= n:
            return rec(lo, half)
        return (rec(lo, half), rec(lo + half, half))

    return rec(0, span)


def balanced_shape(n: int, lo: int = 0) -> Shape:
    if n == 1:
        return lo
    h = n // 2
    return (balanced_shape(h, lo), balanced_shape(n - h, lo + h))


class MlrTree:
    """MLR core over x-sorted leaf summary points and an explicit tree shape.

    Node ids: internal nodes first (``0 .. n_internal-1``), then the leaves
    (``leaf_node[i]``).  ``node_leaf[v]`` is the leaf index of node ``v`` or -1.
    """

    def __init__(self, summaries: Sequence[Point], shape: Optional[Shape] = None,
                 pam: str = "sorted", universe: Optional[int] = None):
        n = len(summaries)
        if n == 0:
            raise MlrError("MlrTree needs at least one leaf")
        self.summaries = list(summaries)
        self.pam_kind = pam
        self.universe = universe
        if shape is None:
            shape = complete_shape(n)
        self._layout(shape)
        self._build_summaries()
        self._build_side_arrays()

    # -- construction -------------------------------------------------
    def _layout(self, shape: Shape) -> None:
        n = len(self.summaries)
        left: List[int] = []
        right: List[int] = []
        depth: List[int] = []
        parent: List[int] = []
        leaf_refs: List[Tuple[int, int, int]] = []  # (leaf idx, parent slot, side)
        # internal nodes get ids in preorder; leaves are patched after
        stack = [(shape, -1, 0, 0)]
        while stack:
            sub, par, side, dep = stack.pop()
            if isinstance(sub, int):
                leaf_refs.append((sub, par, side))
                continue
            v = len(left)
            left.append(-1)
            right.append(-1)
            depth.append(dep)
            parent.append(par)
            if par >= 0:
                (left if side == 0 else right)[par] = v
            stack.append((sub[1], v, 1, dep + 1))
            stack.append((sub[0], v, 0, dep + 1))
        n_int = len(left)
        if n_int != n - 1:
            raise MlrError(f"shape has {n_int} internal nodes for {n} leaves")
        self.n_internal = n_int
        total = n_int + n
        left.extend([-1] * n)
        right.extend([-1] * n)
        depth.extend([0] * n)
        parent.extend([-1] * n)
        node_leaf = [-1] * total
        leaf_node = [-1] * n
        for li, par, side in leaf_refs:
            if not 0 <= li < n or leaf_node[li] != -1:
                raise MlrError("shape leaves must be a permutation of range(n)")
            v = n_int + li
            leaf_node[li] = v
            node_leaf[v] = li
            parent[v] = par
            depth[v] = depth[par] + 1 if par >= 0 else 0
            if par >= 0:
                (left if side == 0 else right)[par] = v
        # in-order leaves must be 0..n-1
        order = []
        stack2 = [0 if n_int else leaf_node[0]]
        while stack2:
            v = stack2.pop()
            if node_leaf[v] >= 0:
                order.append(node_leaf[v])
            else:
                stack2.append(right[v])
                stack2.append(left[v])
        if order != list(range(n)):
            raise MlrError("shape leaves must appear in x order")
        self.left, self.right, self.depth, self.parent = left, right, depth, parent
        self.node_leaf, self.leaf_node = node_leaf, leaf_node
        self.root = 0 if n_int else leaf_node[0]
        # path labels for O(1) LCA: bit i is the branch taken below depth i
        paths = []
        labels = []
        for li in range(n):
            v = leaf_node[li]
            path = [v]
            bits = 0
            while parent[v] >= 0:
                p = parent[v]
                if right[p] == v:
                    bits |= 1 << (depth[p])
                path.append(p)
                v = p
            path.reverse()
            paths.append(path)
            labels.append(bits)
        self.paths = paths
        self.labels = labels
        self.height = max(depth) if total else 0

    def _build_summaries(self) -> None:
        n_int = self.n_internal
        total = len(self.left)
        qv: List[Optional[Point]] = [None] * total
        lo: List[int] = [0] * total
        hi: List[int] = [0] * total
        for li, v in enumerate(self.leaf_node):
            qv[v] = self.summaries[li]
            lo[v] = hi[v] = li
        # internal ids are preorder, so reversed order visits children first
        for v in range(n_int - 1, -1, -1):
            a, b = self.left[v], self.right[v]
            qa, qb = qv[a], qv[b]
            qv[v] = qa if qa.y < qb.y else qb
            lo[v] = lo[a]
            hi[v] = hi[b]
        self.qv = qv
        self.leaf_lo, self.leaf_hi = lo, hi
        # S_v: merge the children's y-sorted (point, leaf) lists
        merged: List[Optional[list]] = [None] * total
        for li, v in enumerate(self.leaf_node):
            merged[v] = [(self.summaries[li], li)]
        S: List[Optional[NodeArray]] = [None] * total
        for v in range(n_int - 1, -1, -1):
            la, lb = merged[self.left[v]], merged[self.right[v]]
            out = []
            i = j = 0
            while i < len(la) and j < len(lb):
                if la[i][0].y < lb[j][0].y:
                    out.append(la[i])
                    i += 1
                else:
                    out.append(lb[j])
                    j += 1
            out.extend(la[i:])
            out.extend(lb[j:])
            merged[v] = out
            S[v] = NodeArray(out, self.pam_kind, self.universe)
        self.S = S

    def _build_side_arrays(self) -> None:
        qv = self.qv
        left, right = self.left, self.right
        self.left_arrays: List[List[NodeArray]] = []
        self.right_arrays: List[List[NodeArray]] = []
        for path in self.paths:
            D = len(path) - 1
            la: List[NodeArray] = [_EMPTY] * (D + 1)
            ra: List[NodeArray] = [_EMPTY] * (D + 1)
            cur_l: list = []
            cur_r: list = []
            # h = D: nothing below the leaf; walk upward adding one hanging child per level
            for h in range(D - 1, -1, -1):
                p, c = path[h], path[h + 1]
                if right[p] == c:
                    s = left[p]
                    insort(cur_l, (qv[s].y, qv[s], s))
                else:
                    s = right[p]
                    insort(cur_r, (qv[s].y, qv[s], s))
                la[h] = la[h + 1] if right[p] != c else NodeArray([(e[1], e[2]) for e in cur_l])
                ra[h] = ra[h + 1] if right[p] == c else NodeArray([(e[1], e[2]) for e in cur_r])
            self.left_arrays.append(la)
            self.right_arrays.append(ra)

    # -- queries ------------------------------------------------------
    def __len__(self):
        return len(self.summaries)

    def lca(self, i: int, j: int) -> Tuple[int, int]:
        """(node id, depth) of the lowest common ancestor of leaves ``i`` and ``j``."""
        if i == j:
            v = self.leaf_node[i]
            return v, self.depth[v]
        diff = self.labels[i] ^ self.labels[j]
        tau = (diff & -diff).bit_length() - 1
        return self.paths[i][tau], tau

    def is_leaf(self, v: int) -> bool:
        return self.node_leaf[v] >= 0

    def sideways_best(self, i: int, j: int, h: int, d: int, counters: Counters, io=None):
        """Rightmost node hanging between the root paths of leaves ``i < j`` below depth ``h``.

        Exactly two predecessor calls: one in the left array of ``j``, one in
        the right array of ``i``.  Everything hanging left of ``j``'s path lies
        right of everything hanging right of ``i``'s path.
        """
        nl = self.left_arrays[j][h].best(d, counters, io)
        nr = self.right_arrays[i][h].best(d, counters, io)
        return nl if nl is not None else nr

    def subtree_best(self, v: int, d: int, counters: Counters, io=None) -> Optional[int]:
        """Rightmost leaf below ``v`` whose summary has y <= d."""
        li = self.node_leaf[v]
        if li >= 0:
            if io is not None:
                io.touch(self.summaries, li)
            return li if self.summaries[li].y <= d else None
        return self.S[v].best(d, counters, io)

    # -- accounting ---------------------------------------------------
    def entry_count(self) -> int:
        """Entries in q_v, S_v and the side arrays (shared arrays counted once)."""
        seen = set()
        total = len(self.qv)
        for s in self.S:
            if s is not None:
                total += len(s)
        for arrs in (self.left_arrays, self.right_arrays):
            for per_leaf in arrs:
                for a in per_leaf:
                    if id(a) not in seen:
                        seen.add(id(a))
                        total += len(a)
        return total

    def audit(self) -> None:
        """Recompute every summary, S_v and side array from the leaves."""
        n = len(self.summaries)
        for v in range(self.n_internal):
            pts = self.summaries[self.leaf_lo[v]:self.leaf_hi[v] + 1]
            want = min(pts, key=lambda p: p.y)
            if self.qv[v] != want:
                raise AuditError(f"node {v}: q_v={self.qv[v]} expected {want}")
            if self.S[v].pts != sorted(pts, key=lambda p: p.y):
                raise AuditError(f"node {v}: S_v out of sync")
        for li in range(n):
            path = self.paths[li]
            D = len(path) - 1
            for h in range(D + 1):
                want_l, want_r = [], []
                for dd in range(h, D):
                    p, c = path[dd], path[dd + 1]
                    if self.right[p] == c:
                        want_l.append(self.qv[self.left[p]])
                    else:
                        want_r.append(self.qv[self.right[p]])
                if self.left_arrays[li][h].pts != sorted(want_l, key=lambda p: p.y):
                    raise AuditError(f"leaf {li}: left array at h={h} out of sync")
                if self.right_arrays[li][h].pts != sorted(want_r, key=lambda p: p.y):
                    raise AuditError(f"leaf {li}: right array at h={h} out of sync")


class DenseLocator:
    """``A'``: coordinate -> index of the item whose key is the largest <= c."""

    kind = "dense"

    def __init__(self, keys: Sequence[int], m: int):
        coords = np.arange(m + 2)
        self.table = (np.searchsorted(np.asarray(keys, dtype=np.int64), coords,
                                      side="right") - 1).tolist()
        self.m = m

    def pred(self, c: int, io=None) -> int:
        if io is not None:
            io.touch(self.table, c)
        return self.table[c]

    def entry_count(self) -> int:
        return len(self.table)


class SparseLocator:
    """``A'`` replaced by a binary-search PAM over the keys (large M)."""

    kind = "sparse"

    def __init__(self, keys: Sequence[int], m: int):
        self.pam = SortedSeqPam(list(keys), check=False)
        self.m = m

    def pred(self, c: int, io=None) -> int:
        p = self.pam.predecessor(c, io.touch if io is not None else None)
        return -1 if p is None else p

    def entry_count(self) -> int:
        return len(self.pam.keys)


def make_locator(keys: Sequence[int], m: int, sparse: bool = False):
    return SparseLocator(keys, m) if sparse else DenseLocator(keys, m)


class StaticMlr:
    """MLR-tree over single points: leaves are the points in x order."""

    structure = "static"

    def __init__(self, points: Sequence[Point], g: GridParams, pam: str = "sorted",
                 sparse_locator: bool = False):
        if not points:
            raise MlrError("empty input")
        for p in points:
            g.check_point(p)
        check_distinct(points)
        self.grid = g
        self.points = sorted(points)
        self.xs = [p.x for p in self.points]
        self.pam = pam
        self.tree = MlrTree(self.points, complete_shape(len(self.points)), pam, universe=g.m)
        self.locator = make_locator(self.xs, g.m, sparse_locator)

    def __len__(self):
        return len(self.points)

    @property
    def height(self) -> int:
        return self.tree.height

    def locate_leaf(self, c: int, io=None) -> Optional[int]:
        if not self.grid.contains(c):
            raise OffGridError(f"coordinate {c} outside grid [1,{self.grid.m}]")
        i = self.locator.pred(c, io)
        return None if i < 0 else i

    def successor_leaf(self, c: int, io=None) -> Optional[int]:
        i = self.locator.pred(c, io)
        if i >= 0 and self.xs[i] == c:
            return i
        i += 1
        return i if i < len(self.xs) else None

    def lca(self, la: int, lb: int) -> Tuple[int, int]:
        return self.tree.lca(la, lb)

    def rightmost_qualifying(self, la: int, lb: int, d: int,
                             counters: Optional[Counters] = None, io=None) -> Optional[int]:
        """Node whose subtree holds the max-x point of leaves ``la..lb`` with y <= d."""
        counters = counters if counters is not None else Counters()
        t = self.tree
        pts = self.points
        if la == lb:
            if io is not None:
                io.touch(pts, la)
            return t.leaf_node[la] if pts[la].y <= d else None
        _, tau = t.lca(la, lb)
        node = t.sideways_best(la, lb, tau + 1, d, counters, io)
        if io is not None:
            io.touch(pts, lb)
        if pts[lb].y <= d:
            return t.leaf_node[lb]
        if node is not None:
            return node
        if io is not None:
            io.touch(pts, la)
        if pts[la].y <= d:
            return t.leaf_node[la]
        return None

    def query(self, q: ThreeSidedQuery, io=None) -> SkylineAnswer:
        q.validate(self.grid)
        c = Counters()
        out: List[Point] = []
        a, b, d = q.a, q.b, q.d
        t = self.tree
        while a <= b and d >= 1:
            c.loop_iterations += 1
            la = self.successor_leaf(a, io)
            lb = self.locate_leaf(b, io)
            if la is None or lb is None or la > lb:
                break
            v = self.rightmost_qualifying(la, lb, d, c, io)
            if v is None:
                break
            li = t.subtree_best(v, d, c, io)
            z = self.points[li]
            out.append(z)
            b, d = z.x - 1, z.y - 1
        return SkylineAnswer(out, c)

    def entry_count(self) -> int:
        return self.tree.entry_count()

    def build_report(self) -> dict:
        return {"structure": "static", "N": len(self.points), "M": self.grid.m,
                "H": self.tree.height, "pam": self.pam,
                "entries": {"tree": self.tree.entry_count(),
                            "locator": self.locator.entry_count()}}

    def audit(self) -> None:
        self.tree.audit()
        for c in range(1, self.grid.m + 1):
            want = max((i for i, x in enumerate(self.xs) if x <= c), default=-1)
            if self.locator.pred(c) != want:
                raise AuditError(f"locator[{c}] = {self.locator.pred(c)} expected {want}")


def build_static(points: Sequence[Point], g: GridParams, pam: str = "sorted",
                 sparse_locator: bool = False) -> StaticMlr:
    return StaticMlr(points, g, pam, sparse_locator)


def query_skyline(t: StaticMlr, q: ThreeSidedQuery) -> SkylineAnswer:
    return t.query(q)
