"""Predecessor access methods (PAMs) and the prefix-argmax (h-RMQ) table.

All PAMs answer ``predecessor(k)``: the 0-based position of the largest
stored key ``<= k``, or ``None``.  The optional ``touch`` callback receives
``(self, slot)`` for every stored entry read, which the I/O simulator uses to
charge block accesses.
"""
from __future__ import annotations

from bisect import bisect_right
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import MlrError

Touch = Optional[Callable[[object, int], None]]


class PamBuildError(MlrError):
    pass


def _check_ascending(keys: Sequence[int]) -> None:
    for i in range(1, len(keys)):
        if keys[i] <= keys[i - 1]:
            raise PamBuildError(
                f"PAM keys must be strictly ascending; position {i}: {keys[i - 1]} then {keys[i]}")


def _bsearch(pam, keys: Sequence[int], k: int, touch: Touch) -> Optional[int]:
    lo, hi = 0, len(keys)
    while lo < hi:
        mid = (lo + hi) >> 1
        touch(pam, mid)
        if keys[mid] <= k:
            lo = mid + 1
        else:
            hi = mid
    return lo - 1 if lo else None


class SortedSeqPam:
    """Binary search over a sorted array."""

    kind = "sorted"
    t_pam = "O(log n)"
    s_pam = "O(n)"
    c_pam = "O(n)"
    __slots__ = ("keys",)

    def __init__(self, keys: Sequence[int], check: bool = True):
        if check:
            _check_ascending(keys)
        self.keys = keys

    def __len__(self):
        return len(self.keys)

    def predecessor(self, k: int, touch: Touch = None) -> Optional[int]:
        if touch is not None:
            return _bsearch(self, self.keys, k, touch)
        i = bisect_right(self.keys, k)
        return i - 1 if i else None

    def slots(self) -> int:
        return len(self.keys)


class SmallSetPam(SortedSeqPam):
    """Predecessor over a short sequence (stand-in for a q*-heap).

    Binary search over at most ``k_max`` keys; the constant-time bound of a
    real q*-heap is not reproduced, the search costs O(log k_max).
    """

    kind = "small"
    t_pam = "O(log k_max)"
    __slots__ = ()

    def __init__(self, keys: Sequence[int], k_max: int = 64, check: bool = True):
        if len(keys) > k_max:
            raise PamBuildError(f"SmallSetPam holds at most {k_max} keys, got {len(keys)}")
        super().__init__(keys, check)


class GridTriePam:
    """Bitwise trie over ``[0, 2**w)`` with binary search on prefix length.

    Every level ``L`` stores a hash table from the ``L``-bit prefixes that
    occur to the (min, max) key positions beneath them.  A query binary
    searches for the longest present prefix of ``k`` (O(log w) probes, i.e.
    O(log log M)) and reads the answer off that prefix's min/max positions.
    """

    kind = "trie"
    t_pam = "O(log log M)"
    s_pam = "O(n log M)"
    c_pam = "O(n log M)"
    __slots__ = ("keys", "w", "levels", "slot_base", "_slot_of")

    def __init__(self, keys: Sequence[int], universe: Optional[int] = None, check: bool = True):
        if check:
            _check_ascending(keys)
        self.keys = keys
        top = max(universe or 0, keys[-1] if keys else 0, 1)
        self.w = top.bit_length()
        w = self.w
        self.levels: List[Dict[int, Tuple[int, int]]] = []
        for lev in range(w + 1):
            shift = w - lev
            table: Dict[int, Tuple[int, int]] = {}
            for i, key in enumerate(keys):
                pre = key >> shift
                hit = table.get(pre)
                table[pre] = (i, i) if hit is None else (hit[0], i)
            self.levels.append(table)
        self.slot_base = []
        self._slot_of: List[Dict[int, int]] = []
        base = 0
        for table in self.levels:
            self.slot_base.append(base)
            self._slot_of.append({pre: j for j, pre in enumerate(table)})
            base += max(len(table), 1)

    def __len__(self):
        return len(self.keys)

    def slots(self) -> int:
        return sum(max(len(t), 1) for t in self.levels)

    def _probe(self, lev: int, pre: int, touch: Touch):
        hit = self.levels[lev].get(pre)
        if touch is not None:
            touch(self, self.slot_base[lev] + self._slot_of[lev].get(pre, 0))
        return hit

    def predecessor(self, k: int, touch: Touch = None) -> Optional[int]:
        keys = self.keys
        if not keys or k < keys[0]:
            return None
        if k >= keys[-1]:
            return len(keys) - 1
        w = self.w
        # k < keys[-1] < 2**w, so the root prefix matches; search the deepest match
        lo, hi = 0, w
        best = self.levels[0][0]
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            hit = self._probe(mid, k >> (w - mid), touch)
            if hit is None:
                hi = mid - 1
            else:
                lo = mid
                best = hit
        if lo == w:
            return best[0]
        if (k >> (w - lo - 1)) & 1:
            # k branches right where only the left child exists
            return best[1]
        i = best[0] - 1
        return i if i >= 0 else None


PAM_CHOICES = ("sorted", "trie", "small")


def pam_build(keys: Sequence[int], impl: str = "sorted", universe: Optional[int] = None):
    """Build a PAM of the requested kind over strictly ascending ``keys``."""
    if impl == "sorted":
        return SortedSeqPam(keys)
    if impl == "trie":
        return GridTriePam(keys, universe)
    if impl == "small":
        return SmallSetPam(keys)
    raise MlrError(f"unknown PAM {impl!r}; expected one of {PAM_CHOICES}")


class PrefixExtremum:
    """Position of the maximum among the first ``r`` values, in O(1)."""

    __slots__ = ("values", "prefix_argmax")

    def __init__(self, values: Sequence[int]):
        self.values = values
        arg = []
        best = 0
        for i, v in enumerate(values):
            if v > values[best]:
                best = i
            arg.append(best)
        self.prefix_argmax = arg

    def __len__(self):
        return len(self.values)

    def hrmq(self, r: int) -> int:
        """0-based position of the max over the prefix of length ``r`` (1 <= r <= n)."""
        if not 1 <= r <= len(self.prefix_argmax):
            raise IndexError(f"prefix length {r} outside [1, {len(self.prefix_argmax)}]")
        return self.prefix_argmax[r - 1]


def hrmq(pe: PrefixExtremum, r: int) -> int:
    return pe.hrmq(r)


def predecessor(pam, k: int) -> Optional[int]:
    return pam.predecessor(k)
