"""The bipartite graph linking [0, 1] to [alpha, 1 + alpha].

An I-vertex y and a J-vertex z are adjacent when z is the image of y
under one of the four generating isometries.  Coinciding images are a
single edge carrying every generator that realizes it; this is what
makes the four extreme vertices degree one while every other vertex has
degree two.  The graph is uncountable, so it is never materialized:
every operation expands neighbors lazily from exact points.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, Optional

from .algebra import (
    ALPHA,
    ONE,
    ZERO,
    AlgebraicPoint,
    AlphaContext,
    canonical_key,
    point,
)
from .errors import (
    EVEN_PATH_COMPONENT,
    EquigraphError,
    Finding,
    VertexOutOfRangeError,
)
from .group import (
    GENERATOR_ELEMENTS,
    IDENTITY,
    Generator,
    GroupElement,
    apply,
    compose,
    element_of,
    inverse,
)

DEFAULT_SAMPLE_DENOMINATOR = 10**6

_GEN_ORDER = {gen: i for i, gen in enumerate(Generator)}


class Side(Enum):
    I = "I"
    J = "J"


@dataclass(frozen=True)
class GVertex:
    side: Side
    point: AlgebraicPoint


@dataclass(frozen=True)
class GEdge:
    """One edge; labels is the full set of generators realizing it."""

    i_point: AlgebraicPoint
    j_point: AlgebraicPoint
    labels: frozenset[Generator]

    def other(self, v: GVertex) -> GVertex:
        if v.side is Side.I:
            return GVertex(Side.J, self.j_point)
        return GVertex(Side.I, self.i_point)

    def canonical_label(self) -> Generator:
        return min(self.labels, key=_GEN_ORDER.__getitem__)


@dataclass(frozen=True)
class ComponentView:
    """Result of walking a component from an origin vertex.

    visited is in path order (cycle order for cycles) and edges[k] joins
    visited[k] to visited[k+1]; for cycles the last edge wraps around to
    visited[0].  kind is "even_cycle", "finite_path", or "partial"; a
    partial view carries the unexpanded frontier tips.
    """

    kind: str
    visited: tuple[GVertex, ...]
    edges: tuple[GEdge, ...]
    origin_index: int
    frontier: tuple[GVertex, ...]
    budget_used: int

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def cycle_length(self) -> Optional[int]:
        return len(self.edges) if self.kind == "even_cycle" else None

    def to_record(self) -> dict:
        rec = {
            "kind": self.kind,
            "size": len(self.visited),
            "budget": self.budget_used,
            "edge_count": self.edge_count,
            "frontier": [vertex_record(v) for v in self.frontier],
        }
        if self.kind == "even_cycle":
            rec["cycle_length"] = self.cycle_length
        return rec


def vertex_record(v: GVertex) -> dict:
    return {"side": v.side.value, "u": str(v.point.u), "v": str(v.point.v)}


class IntervalGraph:
    """Lazy view of the graph for one validated alpha."""

    def __init__(
        self, ctx: AlphaContext, sample_denominator: int = DEFAULT_SAMPLE_DENOMINATOR
    ):
        self.ctx = ctx
        self.sample_denominator = sample_denominator
        self.i_lo, self.i_hi = ZERO, ONE
        self.j_lo, self.j_hi = ALPHA, ONE + ALPHA
        self._neighbor_cache: dict[GVertex, list[GEdge]] = {}

    # ------------------------------------------------------------------
    # vertices and adjacency

    def side_interval(self, side: Side) -> tuple[AlgebraicPoint, AlgebraicPoint]:
        return (self.i_lo, self.i_hi) if side is Side.I else (self.j_lo, self.j_hi)

    def check_vertex(self, v: GVertex) -> None:
        lo, hi = self.side_interval(v.side)
        if not self.ctx.in_interval(v.point, lo, hi, closed=True):
            raise VertexOutOfRangeError(f"{v.point} outside {v.side.value} interval")

    def vertex(self, side: Side, pt: AlgebraicPoint) -> GVertex:
        v = GVertex(side, pt)
        self.check_vertex(v)
        return v

    def neighbors(self, v: GVertex) -> list[GEdge]:
        """Edges at v, deduplicated by far point, sorted by far point."""
        cached = self._neighbor_cache.get(v)
        if cached is not None:
            return list(cached)
        self.check_vertex(v)
        ctx = self.ctx
        buckets: dict[tuple, tuple[AlgebraicPoint, set[Generator]]] = {}
        if v.side is Side.I:
            for gen, el in GENERATOR_ELEMENTS.items():
                z = apply(el, v.point)
                if ctx.in_interval(z, self.j_lo, self.j_hi, closed=True):
                    buckets.setdefault(canonical_key(z), (z, set()))[1].add(gen)
            edges = [
                GEdge(v.point, z, frozenset(gens)) for z, gens in buckets.values()
            ]
        else:
            for gen, el in GENERATOR_ELEMENTS.items():
                y = apply(inverse(el), v.point)
                if ctx.in_interval(y, self.i_lo, self.i_hi, closed=True):
                    buckets.setdefault(canonical_key(y), (y, set()))[1].add(gen)
            edges = [
                GEdge(y, v.point, frozenset(gens)) for y, gens in buckets.values()
            ]

        def far(e: GEdge) -> AlgebraicPoint:
            return e.j_point if v.side is Side.I else e.i_point

        edges.sort(key=cmp_to_key(lambda e1, e2: ctx.compare(far(e1), far(e2))))
        self._neighbor_cache[v] = edges
        return list(edges)

    def degree(self, v: GVertex) -> int:
        return len(self.neighbors(v))

    # ------------------------------------------------------------------
    # traversal

    def bfs_distance(self, u: GVertex, v: GVertex, budget: int) -> Optional[int]:
        """Exact graph distance, or None if not reached within budget.

        budget bounds the number of expanded vertices; exhaustion and
        true unreachability both surface as None.
        """
        self.check_vertex(u)
        self.check_vertex(v)
        if budget <= 0:
            raise ValueError(f"budget must be positive, got {budget}")
        if u == v:
            return 0
        seen = {u}
        queue: deque[tuple[GVertex, int]] = deque([(u, 0)])
        expanded = 0
        while queue:
            if expanded >= budget:
                return None
            cur, dist = queue.popleft()
            expanded += 1
            for e in self.neighbors(cur):
                w = e.other(cur)
                if w == v:
                    return dist + 1
                if w not in seen:
                    seen.add(w)
                    queue.append((w, dist + 1))
        return None

    def explore_component(self, v: GVertex, budget: int) -> ComponentView:
        """Walk the component of v in both directions.

        Degrees are 1 or 2, so components are paths or cycles and a walk
        suffices.  A finite path with an even edge count is raised as a
        Finding rather than returned: it would contradict the structure
        this graph is built to exhibit.
        """
        self.check_vertex(v)
        chain: deque[GVertex] = deque([v])
        chain_edges: deque[GEdge] = deque()
        frontier: list[GVertex] = []
        seen: set[GVertex] = {v}
        state = {"expanded": 0, "cycle": False}
        if budget <= 0:
            return ComponentView("partial", (v,), (), 0, (v,), 0)
        origin_edges = self.neighbors(v)
        state["expanded"] = 1
        if len(origin_edges) > 2:
            raise EquigraphError(f"vertex of degree {len(origin_edges)} at {v}")

        def walk(first_edge: GEdge, append: bool, limit: int) -> None:
            prev, via = v, first_edge
            cur = first_edge.other(v)
            while True:
                if cur in seen:
                    # met the explored region again: the closing edge of a
                    # cycle (2-regularity leaves no other way back); it
                    # joins the two chain ends, so it always goes last
                    chain_edges.append(via)
                    state["cycle"] = True
                    return
                seen.add(cur)
                if append:
                    chain.append(cur)
                    chain_edges.append(via)
                else:
                    chain.appendleft(cur)
                    chain_edges.appendleft(via)
                if state["expanded"] >= limit:
                    frontier.append(cur)
                    return
                edges = self.neighbors(cur)
                state["expanded"] += 1
                onward = [e for e in edges if e.other(cur) != prev]
                if len(onward) > 1:
                    raise EquigraphError(f"vertex of degree >2 at {cur}")
                if not onward:
                    return  # degree-one endpoint
                via = onward[0]
                prev, cur = cur, via.other(cur)

        # give the first direction half the budget so the view is centered
        # on the origin; the second direction takes whatever remains
        two_way = len(origin_edges) == 2
        walk(origin_edges[0], append=True, limit=(budget + 1) // 2 if two_way else budget)
        if not state["cycle"] and two_way:
            walk(origin_edges[1], append=False, limit=budget)

        origin_index = list(chain).index(v)
        visited = tuple(chain)
        edges = tuple(chain_edges)
        if state["cycle"]:
            length = len(edges)
            if length % 2 != 0:
                raise EquigraphError(f"odd cycle of length {length} at {v}")
            return ComponentView(
                "even_cycle", visited, edges, origin_index, (), state["expanded"]
            )
        if frontier:
            return ComponentView(
                "partial",
                visited,
                edges,
                origin_index,
                tuple(frontier),
                state["expanded"],
            )
        edge_count = len(edges)
        if edge_count % 2 == 0:
            raise Finding(
                EVEN_PATH_COMPONENT,
                f"finite component with even edge count {edge_count}",
                witness={
                    "origin": vertex_record(v),
                    "edge_count": edge_count,
                    "endpoints": [
                        vertex_record(visited[0]),
                        vertex_record(visited[-1]),
                    ],
                },
            )
        return ComponentView(
            "finite_path", visited, edges, origin_index, (), state["expanded"]
        )

    # ------------------------------------------------------------------
    # sampling

    def sample_unit_rational(self, rng: random.Random) -> Fraction:
        den = rng.randint(1, self.sample_denominator)
        num = rng.randint(0, den)
        return Fraction(num, den)

    def classify_sample(self, n: int, budget: int, seed: int) -> dict:
        """Degree and component-kind tabulation over n seeded I-samples."""
        rng = random.Random(seed)
        degrees: dict[int, int] = {}
        kinds: dict[str, int] = {}
        degree_one: list[dict] = []
        for _ in range(n):
            y = point(self.sample_unit_rational(rng))
            vtx = GVertex(Side.I, y)
            d = self.degree(vtx)
            degrees[d] = degrees.get(d, 0) + 1
            if d == 1:
                degree_one.append(vertex_record(vtx))
            view = self.explore_component(vtx, budget)
            kinds[view.kind] = kinds.get(view.kind, 0) + 1
        return {
            "samples": n,
            "seed": seed,
            "budget": budget,
            "degrees": {str(k): degrees[k] for k in sorted(degrees)},
            "kinds": {k: kinds[k] for k in sorted(kinds)},
            "degree_one_hits": degree_one,
        }

    def extreme_vertices(self) -> list[GVertex]:
        """The four vertices of degree one, one per side endpoint."""
        return [
            GVertex(Side.I, self.i_lo),
            GVertex(Side.I, self.i_hi),
            GVertex(Side.J, self.j_lo),
            GVertex(Side.J, self.j_hi),
        ]


# ----------------------------------------------------------------------
# chain arithmetic over explored components


def chain_element(view: ComponentView, i: int, j: int) -> GroupElement:
    """Element mapping visited[i]'s point to visited[j]'s point.

    Composes canonical edge labels along the chain; requires indices into
    the non-wrapping part of the view.
    """
    n = len(view.visited)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"indices ({i}, {j}) outside view of size {n}")
    step = 1 if j >= i else -1
    acc = IDENTITY
    pos = i
    while pos != j:
        nxt = pos + step
        edge = view.edges[min(pos, nxt)]
        el = element_of(edge.canonical_label())
        src = view.visited[pos]
        if src.side is Side.I:
            acc = compose(el, acc)  # I -> J applies the label
        else:
            acc = compose(inverse(el), acc)  # J -> I applies its inverse
        pos = nxt
    return acc


# ----------------------------------------------------------------------
# edge-set geometry


def generator_domain(
    ctx: AlphaContext, gen: Generator
) -> tuple[AlgebraicPoint, AlgebraicPoint]:
    """The closed subinterval of [0, 1] that gen maps into [alpha, 1+alpha]."""
    el = GENERATOR_ELEMENTS[gen]
    shift = AlgebraicPoint(2 * el.c, 2 * el.b)
    j_lo, j_hi = ALPHA, ONE + ALPHA
    if el.a == 1:
        lo, hi = j_lo - shift, j_hi - shift
    else:
        lo, hi = shift - j_hi, shift - j_lo
    if ctx.lt(lo, ZERO):
        lo = ZERO
    if ctx.lt(ONE, hi):
        hi = ONE
    if ctx.lt(hi, lo):
        raise EquigraphError(f"{gen.value} has empty domain")  # pragma: no cover
    return lo, hi


Corner = tuple[AlgebraicPoint, AlgebraicPoint]


def edge_polygon(ctx: AlphaContext) -> list[Corner]:
    """Corners of the closed polygon traced by the four generator graphs.

    Each generator contributes the segment {(y, gen(y))} over its domain;
    the segments chain into one closed loop with unit slopes.  Corners are
    returned in traversal order, starting from the lexicographically
    smallest (i, j) corner.
    """
    segments: list[tuple[Corner, Corner]] = []
    for gen, el in GENERATOR_ELEMENTS.items():
        lo, hi = generator_domain(ctx, gen)
        segments.append(((lo, apply(el, lo)), (hi, apply(el, hi))))

    def corner_key(c: Corner) -> tuple:
        return canonical_key(c[0]) + canonical_key(c[1])

    ends: dict[tuple, list[tuple[int, int]]] = {}
    corners_by_key: dict[tuple, Corner] = {}
    for si, seg in enumerate(segments):
        for ei in (0, 1):
            k = corner_key(seg[ei])
            ends.setdefault(k, []).append((si, ei))
            corners_by_key[k] = seg[ei]
    bad = [k for k, v in ends.items() if len(v) != 2]
    if bad:
        raise EquigraphError(f"segments do not chain into a loop: {bad}")

    def exact_order(c1: Corner, c2: Corner) -> int:
        first = ctx.compare(c1[0], c2[0])
        return first if first != 0 else ctx.compare(c1[1], c2[1])

    start_key = corner_key(
        min(corners_by_key.values(), key=cmp_to_key(exact_order))
    )
    loop: list[Corner] = []
    key = start_key
    si, ei = ends[key][0]
    while True:
        loop.append(corners_by_key[key])
        other_end = segments[si][1 - ei]
        key = corner_key(other_end)
        if key == start_key:
            break
        a, b = ends[key]
        si, ei = b if a == (si, 1 - ei) else a
    if len(loop) != len(segments):
        raise EquigraphError("polygon chaining did not visit every segment")
    return loop
