"""Grid geometry, dominance, query ranges and the canonical coordinate form.

Every index works in the canonical MAX-X/MIN-Y form: larger x is better,
smaller y is better, and a 3-sided query is ``[a, b] x (-inf, d]``.  The
other three preference variants are reduced to it by reflecting coordinates
at ingestion (see :func:`normalize`).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple


class MlrError(ValueError):
    """Base class for input errors raised by the library."""


class OffGridError(MlrError):
    pass


class DuplicateCoordinateError(MlrError):
    pass


class InvalidQueryError(MlrError):
    pass


class Point(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class GridParams:
    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise MlrError(f"grid side must be a positive integer, got {self.m!r}")

    def contains(self, c: int) -> bool:
        return 1 <= c <= self.m

    def check_point(self, p: Point) -> None:
        if not (1 <= p.x <= self.m and 1 <= p.y <= self.m):
            raise OffGridError(f"point {tuple(p)} outside grid [1,{self.m}]^2")


class Semantics(enum.Enum):
    MAX_X_MIN_Y = "max-min"
    MIN_X_MIN_Y = "min-min"
    MAX_X_MAX_Y = "max-max"
    MIN_X_MAX_Y = "min-max"

    @property
    def flips_x(self) -> bool:
        return self in (Semantics.MIN_X_MIN_Y, Semantics.MIN_X_MAX_Y)

    @property
    def flips_y(self) -> bool:
        return self in (Semantics.MAX_X_MAX_Y, Semantics.MIN_X_MAX_Y)

    @classmethod
    def parse(cls, token: "str | Semantics") -> "Semantics":
        if isinstance(token, Semantics):
            return token
        t = token.strip().lower().replace("_", "-").replace("/", "-")
        aliases = {
            "max-x-min-y": "max-min", "min-x-min-y": "min-min",
            "max-x-max-y": "max-max", "min-x-max-y": "min-max",
        }
        t = aliases.get(t, t)
        for s in cls:
            if s.value == t:
                return s
        raise MlrError(f"unknown semantics {token!r}; expected one of "
                       f"{', '.join(s.value for s in cls)}")


CANONICAL = Semantics.MAX_X_MIN_Y


@dataclass(frozen=True)
class ThreeSidedQuery:
    """``[a, b] x (-inf, d]``, all bounds inclusive."""

    a: int
    b: int
    d: int

    def validate(self, g: GridParams) -> None:
        if self.a > self.b:
            raise InvalidQueryError(f"empty x-range: a={self.a} > b={self.b}")
        for name in ("a", "b", "d"):
            v = getattr(self, name)
            if not g.contains(v):
                raise InvalidQueryError(f"{name}={v} outside grid [1,{g.m}]")


@dataclass
class Counters:
    predecessor_queries: int = 0
    rmq_queries: int = 0
    loop_iterations: int = 0

    def as_dict(self) -> dict:
        return {"predecessor_queries": self.predecessor_queries,
                "rmq_queries": self.rmq_queries,
                "loop_iterations": self.loop_iterations}


@dataclass
class SkylineAnswer:
    points: List[Point]
    counters: Counters = field(default_factory=Counters)

    @property
    def t(self) -> int:
        return len(self.points)


def dominates(p: Point, q: Point) -> bool:
    """Canonical MAX-X/MIN-Y dominance: ``p`` at least as good everywhere, better somewhere."""
    return p.x >= q.x and p.y <= q.y and (p.x > q.x or p.y < q.y)


def dominates_under(p: Point, q: Point, s: Semantics) -> bool:
    """Dominance on original coordinates under an arbitrary variant."""
    gx = (p.x <= q.x, p.x < q.x) if s.flips_x else (p.x >= q.x, p.x > q.x)
    gy = (p.y >= q.y, p.y > q.y) if s.flips_y else (p.y <= q.y, p.y < q.y)
    return gx[0] and gy[0] and (gx[1] or gy[1])


def normalize(p: Point, s: Semantics, g: GridParams) -> Point:
    """Reflect ``p`` into canonical form; applying it twice returns ``p``."""
    x = g.m + 1 - p.x if s.flips_x else p.x
    y = g.m + 1 - p.y if s.flips_y else p.y
    return Point(x, y)


def normalize_query(q: ThreeSidedQuery, s: Semantics, g: GridParams) -> ThreeSidedQuery:
    """Map a query given in original coordinates to canonical form.

    The y bound is the open side toward the preferred direction: ``y <= d``
    for MIN-Y variants and ``y >= d`` for MAX-Y variants.
    """
    a, b, d = q.a, q.b, q.d
    if s.flips_x:
        a, b = g.m + 1 - b, g.m + 1 - a
    if s.flips_y:
        d = g.m + 1 - d
    return ThreeSidedQuery(a, b, d)


def in_range(p: Point, q: ThreeSidedQuery) -> bool:
    return q.a <= p.x <= q.b and p.y <= q.d


def check_distinct(points: Sequence[Point]) -> None:
    seen_x, seen_y = {}, {}
    for p in points:
        if p.x in seen_x:
            raise DuplicateCoordinateError(
                f"duplicate x={p.x}: points {tuple(seen_x[p.x])} and {tuple(p)}")
        if p.y in seen_y:
            raise DuplicateCoordinateError(
                f"duplicate y={p.y}: points {tuple(seen_y[p.y])} and {tuple(p)}")
        seen_x[p.x] = p
        seen_y[p.y] = p


@dataclass(frozen=True)
class Perturbation:
    """Tie-breaking onto an expanded grid of side ``m * n``.

    Coordinate ``v`` of the ``j``-th point (in input order) sharing that value
    becomes ``(v - 1) * n + j``; order between distinct values is preserved.
    """

    m: int
    n: int

    @property
    def grid(self) -> GridParams:
        return GridParams(self.m * self.n)

    def map_query(self, q: ThreeSidedQuery) -> ThreeSidedQuery:
        return ThreeSidedQuery((q.a - 1) * self.n + 1, q.b * self.n, q.d * self.n)

    def unmap(self, p: Point) -> Point:
        return Point((p.x - 1) // self.n + 1, (p.y - 1) // self.n + 1)


def ingest(points: Iterable[Tuple[int, int]], g: GridParams,
           semantics: "Semantics | str" = CANONICAL,
           mode: str = "reject") -> Tuple[List[Point], GridParams, Optional[Perturbation]]:
    """Validate and normalize raw input points.

    ``mode="reject"`` raises on duplicate coordinates.  ``mode="perturb"``
    breaks ties by input order on an expanded grid and returns the
    :class:`Perturbation` needed to map queries and results.
    """
    s = Semantics.parse(semantics)
    pts = [Point(int(x), int(y)) for x, y in points]
    for p in pts:
        g.check_point(p)
    pts = [normalize(p, s, g) for p in pts]
    if mode == "reject":
        check_distinct(pts)
        return pts, g, None
    if mode != "perturb":
        raise MlrError(f"unknown ingestion mode {mode!r}")
    n = max(len(pts), 1)
    pert = Perturbation(g.m, n)
    cx: dict = {}
    cy: dict = {}
    out = []
    for p in pts:
        jx = cx[p.x] = cx.get(p.x, 0) + 1
        jy = cy[p.y] = cy.get(p.y, 0) + 1
        out.append(Point((p.x - 1) * n + jx, (p.y - 1) * n + jy))
    return out, pert.grid, pert

