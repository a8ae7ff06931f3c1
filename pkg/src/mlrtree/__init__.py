"""MLR-trees: 3-sided range skyline queries on an integer grid."""
from __future__ import annotations

from typing import Sequence

from .access import GridTriePam, PrefixExtremum, SmallSetPam, SortedSeqPam, pam_build
from .core import (CANONICAL, Counters, DuplicateCoordinateError, GridParams,
                   InvalidQueryError, MlrError, OffGridError, Point, Semantics, SkylineAnswer,
                   ThreeSidedQuery, dominates, in_range, ingest, normalize, normalize_query)
from .dynamic import DynamicConfig, DynamicMlr
from .layered import LayerConfig, LayeredMlr, build_layered, micro_query, perm_label, build_ans
from .mlr import MlrTree, StaticMlr, build_static, query_skyline

STRUCTURES = ("static", "layered", "dynamic")


def build_index(points: Sequence[Point], g: GridParams, structure: str = "layered",
                pam: str = "sorted", sparse_locator: bool = False, **kw):
    """Build one of the three index kinds over canonical points."""
    if structure == "static":
        return StaticMlr(points, g, pam, sparse_locator)
    if structure == "layered":
        return LayeredMlr(points, g, LayerConfig(pam=pam, sparse_locator=sparse_locator, **kw))
    if structure == "dynamic":
        return DynamicMlr(g, points, DynamicConfig(pam=pam, sparse_locator=sparse_locator, **kw))
    raise MlrError(f"unknown structure {structure!r}; expected one of {STRUCTURES}")


__all__ = [
    "CANONICAL", "Counters", "DuplicateCoordinateError", "DynamicConfig", "DynamicMlr",
    "GridParams", "GridTriePam", "InvalidQueryError", "LayerConfig", "LayeredMlr", "MlrError",
    "MlrTree", "OffGridError", "Point", "PrefixExtremum", "STRUCTURES", "Semantics",
    "SkylineAnswer", "SmallSetPam", "SortedSeqPam", "StaticMlr", "ThreeSidedQuery",
    "build_ans", "build_index", "build_layered", "build_static", "dominates", "in_range",
    "ingest", "micro_query", "normalize", "normalize_query", "pam_build", "perm_label",
    "query_skyline",
]
