"""Dynamic three-layer MLR-tree.

Layers 1 and 2 sit on BB[alpha] weight-balanced leaf trees (:class:`WBTree`);
microtrees hold between ``ceil(k/4)`` and ``k`` points.  Updates change one
microtree, split or merge it when it leaves the size window, and propagate
new minima upward.  After ``r * n0`` updates the whole structure is rebuilt
from the live point set (an epoch ends).

Two materialization modes: ``eager`` rebuilds every touched MLR core right
after the update; ``lazy`` only marks them dirty and rebuilds at the next
query, which keeps long insertion runs (violation measurements) cheap.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

from .core import (DuplicateCoordinateError, GridParams, MlrError, OffGridError, Point,
                   SkylineAnswer, ThreeSidedQuery)
from .layered import (K_TAB, Group, MicroTree, build_ans, capped_sizes, chunk_sizes,
                      layer_params, layered_query, link_chain)
from .mlr import AuditError, MlrTree

ALPHA = 0.25


# -- weight-balanced leaf trees -------------------------------------------

class WNode:
    __slots__ = ("left", "right", "parent", "size", "item")

    def __init__(self, item=None):
        self.left: Optional[WNode] = None
        self.right: Optional[WNode] = None
        self.parent: Optional[WNode] = None
        self.size = 1
        self.item = item


class WBTree:
    """Leaf-oriented BB[alpha] tree; items keep a back-pointer ``item.wnode`` to their leaf.

    Every internal node ``v`` satisfies
    ``alpha <= leaves(left(v)) / leaves(v) <= 1 - alpha``.  After an update
    the highest node on the update path that violates it is rebuilt
    perfectly balanced.
    """

    def __init__(self, items: Sequence = (), alpha: float = ALPHA):
        if not 0 < alpha < 0.5:
            raise MlrError(f"alpha must lie in (0, 1/2), got {alpha}")
        self.alpha = alpha
        self.root = self._build(list(items), None) if items else None
        self.rebuilds = 0

    def _build(self, items: list, parent):
        if len(items) == 1:
            node = WNode(items[0])
            items[0].wnode = node
        else:
            h = len(items) // 2
            node = WNode()
            node.left = self._build(items[:h], node)
            node.right = self._build(items[h:], node)
            node.size = len(items)
        node.parent = parent
        return node

    def __len__(self):
        return self.root.size if self.root else 0

    def _leaves(self, v: WNode) -> list:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            if u.item is not None:
                out.append(u.item)
            else:
                stack.append(u.right)
                stack.append(u.left)
        return out

    def items(self) -> list:
        return self._leaves(self.root) if self.root else []

    def _violates(self, v: WNode) -> bool:
        if v.item is not None:
            return False
        r = v.left.size / v.size
        return r < self.alpha or r > 1 - self.alpha

    def _fix_path(self, v: Optional[WNode], delta: int) -> int:
        """Adjust sizes from ``v`` to the root, then rebalance; returns path length."""
        top = None
        steps = 0
        while v is not None:
            v.size += delta
            if self._violates(v):
                top = v
            v = v.parent
            steps += 1
        if top is not None:
            parent = top.parent
            fresh = self._build(self._leaves(top), parent)
            if parent is None:
                self.root = fresh
            elif parent.left is top:
                parent.left = fresh
            else:
                parent.right = fresh
            self.rebuilds += 1
        return steps

    def insert_after(self, old, new) -> int:
        leaf = old.wnode
        parent = leaf.parent
        node = WNode()
        fresh = WNode(new)
        new.wnode = fresh
        node.left, node.right = leaf, fresh
        node.size = 2
        node.parent = parent
        leaf.parent = fresh.parent = node
        if parent is None:
            self.root = node
        elif parent.left is leaf:
            parent.left = node
        else:
            parent.right = node
        return self._fix_path(parent, 1) + 1

    def remove(self, item) -> int:
        leaf = item.wnode
        item.wnode = None
        parent = leaf.parent
        if parent is None:
            self.root = None
            return 1
        sib = parent.right if parent.left is leaf else parent.left
        grand = parent.parent
        sib.parent = grand
        if grand is None:
            self.root = sib
        elif grand.left is parent:
            grand.left = sib
        else:
            grand.right = sib
        return self._fix_path(grand, -1) + 1

    def depth(self, item) -> int:
        v, d = item.wnode, 0
        while v.parent is not None:
            v, d = v.parent, d + 1
        return d

    def shape(self):
        """Nested-tuple shape over leaf indices ``0..n-1`` in order."""
        counter = [0]

        def rec(v):
            if v.item is not None:
                i = counter[0]
                counter[0] += 1
                return i
            return (rec(v.left), rec(v.right))

        return rec(self.root)

    def audit(self) -> None:
        if self.root is None:
            return
        stack = [self.root]
        while stack:
            v = stack.pop()
            if v.item is not None:
                if v.size != 1 or v.item.wnode is not v:
                    raise AuditError("broken WB leaf")
                continue
            if v.size != v.left.size + v.right.size:
                raise AuditError("stale WB subtree size")
            if v.left.parent is not v or v.right.parent is not v:
                raise AuditError("broken WB parent link")
            if self._violates(v):
                raise AuditError(f"weight balance violated: {v.left.size}/{v.size}")
            stack.extend((v.left, v.right))


# -- locators over microtrees ---------------------------------------------

class DenseMicroLocator:
    """Coordinate-indexed table: ``table[c]`` is the microtree whose first x is the largest <= c."""

    kind = "dense"

    def __init__(self, m: int):
        self.m = m
        self.table: list = [None] * (m + 2)

    def _end(self, mt: MicroTree) -> int:
        return mt.next.first if mt.next is not None else self.m + 2

    def add(self, mt: MicroTree) -> None:
        lo, hi = mt.first, self._end(mt)
        self.table[lo:hi] = [mt] * (hi - lo)

    def forget(self, mt: MicroTree) -> None:
        lo, hi = mt.first, self._end(mt)
        self.table[lo:hi] = [mt.prev] * (hi - lo)

    def pred(self, c: int, io=None):
        if io is not None:
            io.touch(self.table, c)
        return self.table[c]

    def entry_count(self) -> int:
        return len(self.table)


class SparseMicroLocator:
    """Sorted first-x keys with bisection (no O(M) table)."""

    kind = "sparse"

    def __init__(self, m: int):
        self.m = m
        self.keys: List[int] = []
        self.items: list = []

    def add(self, mt: MicroTree) -> None:
        i = bisect_left(self.keys, mt.first)
        self.keys.insert(i, mt.first)
        self.items.insert(i, mt)

    def forget(self, mt: MicroTree) -> None:
        i = bisect_left(self.keys, mt.first)
        if i == len(self.keys) or self.items[i] is not mt:
            raise AuditError("sparse locator out of sync")
        del self.keys[i]
        del self.items[i]

    def pred(self, c: int, io=None):
        i = bisect_right(self.keys, c) - 1
        if io is not None:
            io.touch(self.keys, max(i, 0))
        return self.items[i] if i >= 0 else None

    def entry_count(self) -> int:
        return len(self.keys)


# -- epoch and violation bookkeeping ---------------------------------------

@dataclass
class EpochState:
    n0: int
    r: float = 0.5
    updates_since_rebuild: int = 0

    def __post_init__(self):
        if not 0 < self.r < 1:
            raise MlrError(f"rebuild ratio must lie in (0, 1), got {self.r}")

    @property
    def due(self) -> bool:
        return self.updates_since_rebuild > self.r * self.n0


@dataclass
class ViolationLog:
    epochs: List[int] = field(default_factory=list)   # archived per-epoch counts
    current: int = 0
    inserts: int = 0
    flags: List[bool] = field(default_factory=list)

    def snapshot(self) -> dict:
        return {"archived": list(self.epochs), "current": self.current,
                "inserts_this_epoch": self.inserts}


@dataclass
class UpdateReport:
    violating: bool = False
    nodes_touched: int = 0
    structures_rebuilt: int = 0
    rebuilt_epoch: bool = False

    def as_dict(self) -> dict:
        return {"violating": self.violating, "nodes_touched": self.nodes_touched,
                "structures_rebuilt": self.structures_rebuilt,
                "rebuilt_epoch": self.rebuilt_epoch}


@dataclass
class DynamicConfig:
    pam: str = "sorted"
    r: float = 0.5
    alpha: float = ALPHA
    k_tab: int = K_TAB
    k: Optional[int] = None
    t2_target: Optional[int] = None
    sparse_locator: bool = False
    materialize: str = "eager"     # "eager" or "lazy"
    auto_rebuild: bool = True
    log_flags: bool = False


# -- the structure ----------------------------------------------------------

class DynamicMlr:
    """Dynamic MLR-tree supporting insertions and deletions of points."""

    structure = "dynamic"

    def __init__(self, g: GridParams, points: Iterable[Point] = (),
                 cfg: Optional[DynamicConfig] = None):
        self.grid = g
        self.cfg = cfg or DynamicConfig()
        if self.cfg.materialize not in ("eager", "lazy"):
            raise MlrError(f"unknown materialization mode {self.cfg.materialize!r}")
        self.violations = ViolationLog()
        self.epoch = EpochState(0, self.cfg.r)
        self.rebuild_count = 0
        self._bulk_load(list(points))

    # -- bulk loading ----------------------------------------------------
    def _bulk_load(self, pts: List[Point]) -> None:
        cfg, g = self.cfg, self.grid
        for p in pts:
            g.check_point(p)
        xs, ys = {p.x for p in pts}, {p.y for p in pts}
        if len(xs) != len(pts) or len(ys) != len(pts):
            from .core import check_distinct
            check_distinct(pts)
        self.xset, self.yset = xs, ys
        self.n = len(pts)
        pts = sorted(pts)
        t2, k = layer_params(max(self.n, 1), cfg.k_tab)
        self.t2_target = cfg.t2_target or t2
        self.k = cfg.k or k
        self.kmin = -(-self.k // 4)
        self.ans = build_ans(self.k, cfg.k_tab) if self.k <= cfg.k_tab else None
        self.locator = (SparseMicroLocator(g.m) if cfg.sparse_locator
                        else DenseMicroLocator(g.m))
        self.groups: List[Group] = []
        self.head: Optional[MicroTree] = None
        self.t1: Optional[MlrTree] = None
        self.t1_wb: Optional[WBTree] = None
        self.dirty_groups: set = set()
        self.t1_dirty = True
        self.epoch = EpochState(self.n, cfg.r)
        if not pts:
            return
        micros: List[MicroTree] = []
        i = 0
        for size in chunk_sizes(self.n, self.t2_target):
            bucket = pts[i:i + size]
            i += size
            ms, j = [], 0
            for sz in capped_sizes(len(bucket), self.k):
                ms.append(MicroTree(bucket[j:j + sz], self.k, cfg.k_tab))
                j += sz
            grp = Group(ms)
            grp.wb = WBTree(ms, cfg.alpha)
            self._regroup(grp)
            self.groups.append(grp)
            micros.extend(ms)
        link_chain(micros)
        self.head = micros[0]
        for m in micros:
            self.locator.add(m)
        self.t1_wb = WBTree(self.groups, cfg.alpha)
        self._renumber_groups()
        if cfg.materialize == "eager":
            self._materialize()

    def _regroup(self, grp: Group) -> None:
        """Refresh a group's microtree list, back-links and representative (not its core)."""
        grp.micro = grp.wb.items()
        for i, m in enumerate(grp.micro):
            m.group = grp
            m.leaf = i
        grp.rep = min((m.rep for m in grp.micro), key=lambda p: p.y)
        grp.size = sum(len(m) for m in grp.micro)
        grp.dirty = True
        self.dirty_groups.add(grp)

    def _renumber_groups(self) -> None:
        self.groups = self.t1_wb.items() if self.t1_wb is not None else []
        for i, grp in enumerate(self.groups):
            grp.t1_leaf = i
        self.t1_dirty = True

    def _materialize(self) -> int:
        rebuilt = 0
        for grp in self.dirty_groups:
            if grp.wb is None:
                continue
            reps = [m.rep for m in grp.micro]
            grp.tree = MlrTree(reps, grp.wb.shape(), self.cfg.pam, self.grid.m)
            grp.dirty = False
            rebuilt += 1
        self.dirty_groups.clear()
        if self.t1_dirty and self.groups:
            self.t1 = MlrTree([grp.rep for grp in self.groups], self.t1_wb.shape(),
                              self.cfg.pam, self.grid.m)
            rebuilt += 1
        self.t1_dirty = False
        return rebuilt

    # -- queries ---------------------------------------------------------
    def __len__(self):
        return self.n

    def __setstate__(self, state):
        self.__dict__.update(state)
        link_chain([m for grp in self.groups for m in grp.micro])

    def micro_pred(self, c: int, io=None) -> Optional[MicroTree]:
        return self.locator.pred(c, io)

    def query(self, q: ThreeSidedQuery, io=None) -> SkylineAnswer:
        q.validate(self.grid)
        if self.dirty_groups or self.t1_dirty:
            self._materialize()
        return layered_query(self, q, io)

    def points(self) -> List[Point]:
        out = []
        m = self.head
        while m is not None:
            out.extend(m.points)
            m = m.next
        return out

    def destination_group(self, x: int) -> Optional[Group]:
        """Layer-2 tree an insertion at ``x`` would be routed to."""
        m = self.micro_pred(x) or self.head
        return m.group if m is not None else None

    # -- updates ---------------------------------------------------------
    def insert(self, p: Point) -> UpdateReport:
        p = Point(*p)
        self.grid.check_point(p)
        if p.x in self.xset:
            raise DuplicateCoordinateError(f"x={p.x} already present")
        if p.y in self.yset:
            raise DuplicateCoordinateError(f"y={p.y} already present")
        rep = UpdateReport()
        self.xset.add(p.x)
        self.yset.add(p.y)
        self.n += 1
        if self.head is None:
            ep, log = self.epoch, self.violations
            self._bulk_load([p])
            self.epoch, self.violations = ep, log
            rep.nodes_touched = 1
            self.violations.inserts += 1
            return self._finish(rep)
        m = self.micro_pred(p.x) or self.head
        grp = m.group
        old_min = grp.rep.y
        rep.violating = p.y < old_min
        old_rep = m.rep
        loc = self.locator
        moved_first = p.x < m.first
        if moved_first:
            loc.forget(m)
        pts = m.points
        pts.insert(bisect_left(m.xs, p.x), p)
        m.reset(pts, self.cfg.k_tab)
        if moved_first:
            loc.add(m)
        rep.nodes_touched = 1
        grp.size += 1
        if len(m) > self.k:
            self._split_micro(m)
            rep.nodes_touched += grp.wb.depth(m) + 1
        elif m.rep is not old_rep:
            rep.nodes_touched += grp.wb.depth(m)
            grp.dirty = True
            self.dirty_groups.add(grp)
        if p.y < old_min:
            grp.rep = p
            self.t1_dirty = True
            rep.nodes_touched += self.t1_wb.depth(grp)
        if grp.size > 2 * self.t2_target:
            self._split_group(grp)
        self.violations.inserts += 1
        if rep.violating:
            self.violations.current += 1
        return self._finish(rep)

    def delete(self, x: int) -> UpdateReport:
        if not self.grid.contains(x):
            raise OffGridError(f"coordinate {x} outside grid [1,{self.grid.m}]")
        if x not in self.xset:
            raise MlrError(f"no point with x={x}")
        rep = UpdateReport(nodes_touched=1)
        m = self.micro_pred(x)
        i = bisect_left(m.xs, x)
        p = m.points[i]
        self.xset.discard(x)
        self.yset.discard(p.y)
        self.n -= 1
        if self.n == 0:
            ep, log = self.epoch, self.violations
            self._bulk_load([])
            self.epoch, self.violations = ep, log
            return self._finish(rep)
        grp = m.group
        grp.size -= 1
        lowered = grp.rep == p
        if lowered:
            rep.nodes_touched += self.t1_wb.depth(grp)
            self.t1_dirty = True
        if len(m) == 1:
            # possible only when the size floor is 1
            self._unlink_micro(m)
            if grp.wb is None:
                self._drop_group(grp)
                return self._finish(rep)
            survivor = grp.micro[0]
        else:
            old_rep = m.rep
            if i == 0:
                self.locator.forget(m)
            del m.points[i]
            m.reset(m.points, self.cfg.k_tab)
            if i == 0:
                self.locator.add(m)
            if m.rep is not old_rep:
                rep.nodes_touched += grp.wb.depth(m)
                grp.dirty = True
                self.dirty_groups.add(grp)
            if lowered:
                grp.rep = min((mm.rep for mm in grp.micro), key=lambda q: q.y)
            survivor = m
            if len(m) < self.kmin:
                survivor = self._fix_underflow(m)
        grp = survivor.group
        if len(self.groups) > 1 and grp.size < self.t2_target / 4:
            self._merge_group(grp)
        return self._finish(rep)

    def _finish(self, rep: UpdateReport) -> UpdateReport:
        self.epoch.updates_since_rebuild += 1
        if self.cfg.log_flags:
            self.violations.flags.append(rep.violating)
        if self.cfg.auto_rebuild and self.maybe_rebuild():
            rep.rebuilt_epoch = True
        if self.cfg.materialize == "eager":
            rep.structures_rebuilt += self._materialize()
        return rep

    # -- microtree maintenance -------------------------------------------
    def _split_micro(self, m: MicroTree) -> MicroTree:
        pts = m.points
        h = (len(pts) + 1) // 2
        m2 = MicroTree(pts[h:], self.k, self.cfg.k_tab)
        self.locator.forget(m)
        m.reset(pts[:h], self.cfg.k_tab)
        m2.next = m.next
        m2.prev = m
        if m.next is not None:
            m.next.prev = m2
        m.next = m2
        self.locator.add(m)
        self.locator.add(m2)
        grp = m.group
        grp.wb.insert_after(m, m2)
        self._regroup(grp)
        return m2

    def _unlink_micro(self, m: MicroTree) -> None:
        """Remove microtree ``m`` from the x-chain, the locator and its group tree."""
        self.locator.forget(m)
        if m.prev is not None:
            m.prev.next = m.next
        else:
            self.head = m.next
        if m.next is not None:
            m.next.prev = m.prev
        m.group.wb.remove(m)
        if m.group.wb.root is None:
            m.group.wb = None
        else:
            self._regroup(m.group)

    def _fix_underflow(self, m: MicroTree) -> MicroTree:
        """Merge an undersized microtree with an x-adjacent sibling; returns the survivor."""
        grp = m.group
        if len(grp.micro) == 1:
            if len(self.groups) == 1:
                return m        # the sole microtree may be small
            grp = self._merge_group(grp, split=False)
        i = m.leaf
        left, right = (grp.micro[i - 1], m) if i > 0 else (m, grp.micro[i + 1])
        merged = left.points + right.points
        self._unlink_micro(right)
        left.reset(merged, self.cfg.k_tab)
        self._regroup(left.group)
        if len(left) > self.k:
            self._split_micro(left)
        if left.group.size > 2 * self.t2_target:
            self._split_group(left.group)
        return left

    # -- group maintenance -----------------------------------------------
    def _split_group(self, grp: Group) -> None:
        ms = grp.micro
        if len(ms) < 2:
            return
        h = len(ms) // 2
        g2 = Group(ms[h:])
        grp.wb = WBTree(ms[:h], self.cfg.alpha)
        g2.wb = WBTree(ms[h:], self.cfg.alpha)
        self._regroup(grp)
        self._regroup(g2)
        self.t1_wb.insert_after(grp, g2)
        self._renumber_groups()

    def _merge_group(self, grp: Group, split: bool = True) -> Group:
        """Merge ``grp`` with an x-adjacent group; returns the surviving group."""
        i = grp.t1_leaf
        left, right = (self.groups[i - 1], grp) if i > 0 else (grp, self.groups[i + 1])
        ms = left.micro + right.micro
        self.t1_wb.remove(right)
        self.dirty_groups.discard(right)
        right.wb = None
        left.wb = WBTree(ms, self.cfg.alpha)
        self._regroup(left)
        self._renumber_groups()
        if split and left.size > 2 * self.t2_target:
            self._split_group(left)
        return left

    def _drop_group(self, grp: Group) -> None:
        self.t1_wb.remove(grp)
        self.dirty_groups.discard(grp)
        self._renumber_groups()

    # -- epochs ----------------------------------------------------------
    def maybe_rebuild(self) -> bool:
        """Rebuild from the live set once more than ``r * n0`` updates happened."""
        if not self.epoch.due:
            return False
        self.violations.epochs.append(self.violations.current)
        self.violations.current = 0
        self.violations.inserts = 0
        self._bulk_load(self.points())
        self.rebuild_count += 1
        return True

    def violation_stats(self) -> dict:
        return self.violations.snapshot()

    # -- reporting and audits ---------------------------------------------
    def entry_counts(self) -> dict:
        if self.dirty_groups or self.t1_dirty:
            self._materialize()
        if not self.groups:
            return {"t1": 0, "t2": 0, "t3": 0, "ans": 0, "locator": 0}
        return {"t1": self.t1.entry_count(),
                "t2": sum(grp.tree.entry_count() for grp in self.groups),
                "t3": self.n,
                "ans": len(self.ans) if self.ans is not None else 0,
                "locator": self.locator.entry_count()}

    def aux_entries(self) -> int:
        e = self.entry_counts()
        return e["t1"] + e["t2"] + e["t3"]

    def build_report(self) -> dict:
        return {"structure": "dynamic", "N": self.n, "M": self.grid.m, "pam": self.cfg.pam,
                "k": self.k, "t2_target": self.t2_target,
                "layers": {"t1_leaves": len(self.groups),
                           "t3_trees": sum(len(grp.micro) for grp in self.groups)},
                "epoch": {"n0": self.epoch.n0, "r": self.epoch.r},
                "entries": self.entry_counts()}

    def audit_balance(self) -> None:
        """The cheap part of :meth:`audit`: microtree size window and weight balance."""
        sole = len(self.micros_in_order()) == 1
        for m in self.micros_in_order():
            if len(m) > self.k or (not sole and len(m) < self.kmin):
                raise AuditError(f"microtree size {len(m)} outside [{self.kmin}, {self.k}]")
        if self.groups:
            self.t1_wb.audit()
            for grp in self.groups:
                grp.wb.audit()

    def micros_in_order(self) -> List[MicroTree]:
        return [m for grp in self.groups for m in grp.micro]

    def audit(self) -> None:
        """Size window, weight balance, chain/locator consistency and every MLR core."""
        if self.dirty_groups or self.t1_dirty:
            self._materialize()
        if self.n == 0:
            if self.head is not None or self.groups:
                raise AuditError("empty structure with leftover microtrees")
            return
        chain = []
        m = self.head
        while m is not None:
            if m.next is not None and m.next.prev is not m:
                raise AuditError("broken microtree chain")
            chain.append(m)
            m = m.next
        in_groups = [m for grp in self.groups for m in grp.micro]
        if len(chain) != len(in_groups) or any(a is not b for a, b in zip(chain, in_groups)):
            raise AuditError("group microtrees disagree with the x-chain")
        pts = [p for m in chain for p in m.points]
        if len(pts) != self.n or any(pts[i].x >= pts[i + 1].x for i in range(len(pts) - 1)):
            raise AuditError("microtree points out of order")
        sole = len(chain) == 1
        for m in chain:
            if len(m) > self.k or (not sole and len(m) < self.kmin):
                raise AuditError(f"microtree size {len(m)} outside [{self.kmin}, {self.k}]")
            if m.rep != min(m.points, key=lambda p: p.y):
                raise AuditError("stale microtree representative")
        self.t1_wb.audit()
        self.t1.audit()
        for i, grp in enumerate(self.groups):
            grp.wb.audit()
            grp.tree.audit()
            want = min((p for m in grp.micro for p in m.points), key=lambda p: p.y)
            if grp.rep != want or self.t1.summaries[i] != want:
                raise AuditError(f"group {i}: stale representative")
            if grp.size != sum(len(m) for m in grp.micro):
                raise AuditError(f"group {i}: stale size")
        for m in chain:
            lo = m.first
            if self.locator.pred(lo) is not m:
                raise AuditError(f"locator misses microtree starting at {lo}")
            if lo > 1 and self.locator.pred(lo - 1) is not m.prev:
                raise AuditError(f"locator boundary before {lo} is wrong")
        ep = self.epoch
        if ep.n0 > 0 and not ep.due and not (1 - ep.r) * ep.n0 <= self.n <= (1 + ep.r) * ep.n0:
            raise AuditError(f"N={self.n} left the epoch window around n0={self.epoch.n0}")


def bulk_dynamic(points: Sequence[Point], g: GridParams,
                 cfg: Optional[DynamicConfig] = None) -> DynamicMlr:
    return DynamicMlr(g, points, cfg)


def insert(d: DynamicMlr, p: Point) -> UpdateReport:
    return d.insert(p)


def delete(d: DynamicMlr, x: int) -> UpdateReport:
    return d.delete(x)


def maybe_rebuild(d: DynamicMlr) -> bool:
    return d.maybe_rebuild()


def violation_stats(d: DynamicMlr) -> dict:
    return d.violation_stats()
