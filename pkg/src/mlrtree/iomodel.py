"""Block-transfer accounting for the static, layered and dynamic indexes.

Every stored sequence of the structure gets a base offset in one linear
address space; offsets are packed contiguously per component and each
component starts on a block boundary.  Queries run with a tracer whose
``touch(obj, idx)`` maps the read to a block and feeds an LRU cache of
``R // B`` frames; misses are block transfers.

Entry size: one point, one key or one table slot is one entry.  A
microtree's two small predecessor structures are packed into the same
entries as its points, so a microtree occupies ``|m|`` entries.  ANS table
lookups are not charged (the table is shared and small).
"""
from __future__ import annotations

import json
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .access import GridTriePam
from .core import MlrError, SkylineAnswer, ThreeSidedQuery
from .layered import LayeredMlr
from .mlr import _EMPTY, DenseLocator, MlrTree, NodeArray, SparseLocator, StaticMlr

COMPONENTS = ("locator", "path", "secondary", "micro")


@dataclass(frozen=True)
class IoConfig:
    block_size: int = 64
    memory: int = 2048

    def __post_init__(self):
        if self.block_size < 2:
            raise MlrError(f"block size must be >= 2, got {self.block_size}")
        if self.memory < 2 * self.block_size:
            raise MlrError(f"memory must hold >= 2 blocks ({2 * self.block_size} entries), "
                           f"got {self.memory}")

    @property
    def frames(self) -> int:
        return self.memory // self.block_size


@dataclass
class BlockAccessStats:
    block_size: int
    memory: int
    transfers: int = 0
    hits: int = 0
    breakdown: Dict[str, Dict[str, int]] = field(
        default_factory=lambda: {c: {"transfers": 0, "hits": 0} for c in COMPONENTS})

    @property
    def accesses(self) -> int:
        return self.transfers + self.hits

    def as_dict(self) -> dict:
        return {"B": self.block_size, "R": self.memory, "transfers": self.transfers,
                "hits": self.hits, "breakdown": self.breakdown}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


class LruCache:
    """LRU over block ids with a fixed number of frames."""

    def __init__(self, frames: int):
        self.frames = frames
        self.blocks: "OrderedDict[int, None]" = OrderedDict()

    def access(self, block: int) -> bool:
        """True on a hit; on a miss the block is loaded (evicting the LRU block)."""
        if block in self.blocks:
            self.blocks.move_to_end(block)
            return True
        self.blocks[block] = None
        if len(self.blocks) > self.frames:
            self.blocks.popitem(last=False)
        return False

    def clear(self) -> None:
        self.blocks.clear()


# -- region enumeration ---------------------------------------------------

Region = Tuple[object, int, str]   # (object, entry count, component)


def _node_array_regions(a: NodeArray, comp: str) -> Iterator[Tuple[object, int, str, object]]:
    # (obj, size, comp, alias_of)
    yield a, 2 * len(a), comp, None
    if isinstance(a.pam, GridTriePam):
        yield a.pam, a.pam.slots(), comp, None
    else:
        yield a.pam, 0, comp, a


def _tree_regions(t: MlrTree):
    yield t.summaries, len(t.summaries), "path", None
    seen = {id(_EMPTY)}
    for arrs in (t.left_arrays, t.right_arrays):
        for per_leaf in arrs:
            for a in per_leaf:
                if id(a) not in seen:
                    seen.add(id(a))
                    yield from _node_array_regions(a, "path")
    for s in t.S:
        if s is not None:
            yield from _node_array_regions(s, "secondary")


def _locator_regions(loc):
    if isinstance(loc, DenseLocator):
        yield loc.table, len(loc.table), "locator", None
    elif isinstance(loc, SparseLocator):
        yield loc.pam, len(loc.pam.keys), "locator", None
    elif hasattr(loc, "table"):
        yield loc.table, len(loc.table), "locator", None
    else:
        yield loc.keys, len(loc.keys), "locator", None


def _micro_regions(m):
    yield m, len(m), "micro", None
    yield m.x_pam, 0, "micro", m
    yield m.y_pam, 0, "micro", m


def _regions(s):
    if isinstance(s, StaticMlr):
        yield from _locator_regions(s.locator)
        yield from _tree_regions(s.tree)
        yield s.points, 0, "path", s.tree.summaries
        return
    if isinstance(s, MlrTree):
        yield from _tree_regions(s)
        return
    if isinstance(s, LayeredMlr) and s.fallback is not None:
        yield from _regions(s.fallback)
        return
    if hasattr(s, "_materialize"):
        s._materialize()
    yield from _locator_regions(s.locator)
    if s.t1 is not None:
        yield from _tree_regions(s.t1)
        for grp in s.groups:
            yield from _tree_regions(grp.tree)
    m = s.head
    while m is not None:
        yield from _micro_regions(m)
        m = m.next


class BlockMap:
    """Block-mapped view of a built structure."""

    def __init__(self, structure, cfg: IoConfig):
        self.structure = structure
        self.cfg = cfg
        self.base: Dict[int, Tuple[int, str]] = {}
        self.keep: List[object] = []      # keep ids stable while mapped
        self.component_entries = {c: 0 for c in COMPONENTS}
        self.component_blocks = {c: 0 for c in COMPONENTS}
        regs = list(_regions(structure))
        B = cfg.block_size
        offset = 0
        for comp in COMPONENTS:
            start = offset
            for obj, size, c, alias in regs:
                if c != comp or alias is not None:
                    continue
                self.base[id(obj)] = (offset, comp)
                self.keep.append(obj)
                offset += size
            used = offset - start
            self.component_entries[comp] = used
            self.component_blocks[comp] = -(-used // B)
            offset = start + self.component_blocks[comp] * B
        for obj, size, c, alias in regs:
            if alias is not None:
                self.base[id(obj)] = self.base[id(alias)]
                self.keep.append(obj)
        self.total_entries = sum(self.component_entries.values())
        self.total_blocks = sum(self.component_blocks.values())
        self.cache = LruCache(cfg.frames)

    def block_of(self, obj, idx: int) -> int:
        return (self.base[id(obj)][0] + idx) // self.cfg.block_size

    def span(self, obj, size: int) -> int:
        """Number of blocks covered by the first ``size`` entries of ``obj``."""
        if size <= 0:
            return 0
        return self.block_of(obj, size - 1) - self.block_of(obj, 0) + 1


class Tracer:
    """The ``io`` object the query code calls ``touch`` on."""

    def __init__(self, bm: BlockMap, stats: BlockAccessStats):
        self.bm = bm
        self.stats = stats
        self.trace: List[int] = []

    def touch(self, obj, idx: int) -> None:
        try:
            base, comp = self.bm.base[id(obj)]
        except KeyError:
            raise MlrError(f"unmapped {type(obj).__name__} touched; re-run blockify") from None
        block = (base + idx) // self.bm.cfg.block_size
        self.trace.append(block)
        hit = self.bm.cache.access(block)
        b = self.stats.breakdown[comp]
        if hit:
            self.stats.hits += 1
            b["hits"] += 1
        else:
            self.stats.transfers += 1
            b["transfers"] += 1


def blockify(structure, cfg: IoConfig) -> BlockMap:
    return BlockMap(structure, cfg)


def traced_query(bm: BlockMap, q: ThreeSidedQuery, cfg: Optional[IoConfig] = None,
                 warm: bool = False) -> Tuple[SkylineAnswer, BlockAccessStats]:
    """Run ``q`` with block accounting; cold cache unless ``warm``."""
    cfg = cfg or bm.cfg
    if cfg != bm.cfg:
        raise MlrError("IoConfig differs from the one used by blockify")
    if not warm:
        bm.cache.clear()
    stats = BlockAccessStats(cfg.block_size, cfg.memory)
    tracer = Tracer(bm, stats)
    ans = bm.structure.query(q, io=tracer)
    bm.last_trace = tracer.trace
    return ans, stats


def replay(trace: List[int], cfg: IoConfig) -> BlockAccessStats:
    """Feed a recorded block trace through a fresh cache (determinism checks)."""
    cache = LruCache(cfg.frames)
    stats = BlockAccessStats(cfg.block_size, cfg.memory)
    for b in trace:
        if cache.access(b):
            stats.hits += 1
        else:
            stats.transfers += 1
    return stats


def sequence_blocks(n_entries: int, cfg: IoConfig) -> int:
    """Blocks used by a contiguous, block-aligned sequence."""
    return -(-n_entries // cfg.block_size)
