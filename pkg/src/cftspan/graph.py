"""Colored weighted multigraphs: model, text format, generators, shortest paths.

Two coloring modes are supported. In ``ecft`` mode every edge carries a color;
in ``vcft`` mode every vertex does. A fault set is a set of colors, and it
damages an edge when it contains the edge color (ecft) or the color of either
endpoint (vcft).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

ECFT = "ecft"
VCFT = "vcft"
INF = math.inf


class GraphFormatError(ValueError):
    """Malformed graph text. ``lineno`` is 1-based, or 0 when not tied to a line."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    w: float
    color: int | None = None

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u

    @property
    def key(self):
        """Processing order: nondecreasing weight, ties by id."""
        return (self.w, self.id)


@dataclass(frozen=True)
class ColoredGraph:
    mode: str
    n: int
    edges: tuple[Edge, ...]
    color_count: int
    vertex_colors: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.mode not in (ECFT, VCFT):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n < 0 or self.color_count < 0:
            raise ValueError("negative size")
        if self.mode == VCFT:
            if self.vertex_colors is None or len(self.vertex_colors) != self.n:
                raise ValueError("vcft graph needs one color per vertex")
            for c in self.vertex_colors:
                if not 0 <= c < self.color_count:
                    raise ValueError(f"vertex color {c} out of range")
        elif self.vertex_colors is not None:
            raise ValueError("ecft graph must not carry vertex colors")
        seen = set()
        for e in self.edges:
            _check_edge(self, e)
            if e.id in seen:
                raise ValueError(f"duplicate edge id {e.id}")
            seen.add(e.id)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_by_id(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def adjacency(self) -> list[list[Edge]]:
        adj: list[list[Edge]] = [[] for _ in range(self.n)]
        for e in self.edges:
            adj[e.u].append(e)
            adj[e.v].append(e)
        return adj

    def neighbors(self, x: int) -> set[int]:
        return {e.other(x) for e in self.adjacency[x]}

    def vcolor(self, x: int) -> int:
        return self.vertex_colors[x]

    def edge_colors(self, e: Edge) -> tuple[int, ...]:
        """Colors whose failure damages ``e``."""
        if self.mode == ECFT:
            return (e.color,)
        a, b = self.vertex_colors[e.u], self.vertex_colors[e.v]
        return (a,) if a == b else tuple(sorted((a, b)))

    def damages(self, F: Iterable[int], e: Edge) -> bool:
        fs = F if isinstance(F, (set, frozenset)) else set(F)
        return any(c in fs for c in self.edge_colors(e))

    def is_simple(self) -> bool:
        pairs = set()
        for e in self.edges:
            p = (min(e.u, e.v), max(e.u, e.v))
            if p in pairs:
                return False
            pairs.add(p)
        return True

    def subgraph(self, edge_ids: Iterable[int]) -> "ColoredGraph":
        """Same vertices, only the listed edges (ids are preserved)."""
        keep = set(edge_ids)
        return ColoredGraph(self.mode, self.n, tuple(e for e in self.edges if e.id in keep),
                            self.color_count, self.vertex_colors)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)


def _check_edge(g: ColoredGraph, e: Edge, lineno: int = 0):
    if not (0 <= e.u < g.n and 0 <= e.v < g.n):
        raise GraphFormatError(f"edge {e.id} has endpoint out of range", lineno)
    if e.u == e.v:
        raise GraphFormatError(f"self-loop at vertex {e.u}", lineno)
    if not (e.w > 0 and math.isfinite(e.w)):
        raise GraphFormatError(f"edge {e.id} has non-positive or non-finite weight", lineno)
    if g.mode == ECFT:
        if e.color is None or not 0 <= e.color < g.color_count:
            raise GraphFormatError(f"edge {e.id} color out of range", lineno)
    elif e.color is not None:
        raise GraphFormatError("vcft edge carries a color field", lineno)


@dataclass(frozen=True)
class FaultSet:
    colors: frozenset
    budget: int

    def __post_init__(self):
        object.__setattr__(self, "colors", frozenset(self.colors))
        if len(self.colors) > self.budget:
            raise ValueError("fault set exceeds its budget")


# ---------------------------------------------------------------- text format

def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_graph(text: str | bytes) -> ColoredGraph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = list(_data_lines(text))
    if not lines:
        raise GraphFormatError("empty input")
    lineno, head = lines[0]
    if len(head) != 4 or head[0] not in (ECFT, VCFT):
        raise GraphFormatError("header must be 'ecft|vcft <n> <m> <color_count>'", lineno)
    mode = head[0]
    try:
        n, m, cc = (int(x) for x in head[1:])
    except ValueError:
        raise GraphFormatError("header counts must be integers", lineno) from None
    if min(n, m, cc) < 0:
        raise GraphFormatError("header counts must be nonnegative", lineno)
    body = lines[1:]
    vcolors = None
    if mode == VCFT:
        if len(body) < n:
            raise GraphFormatError(f"expected {n} vertex-color lines", body[-1][0] if body else lineno)
        vcolors = [None] * n
        for ln, tok in body[:n]:
            if len(tok) != 2:
                raise GraphFormatError("vertex-color line must be '<vertex> <color>'", ln)
            x, c = _ints(tok, ln)
            if not 0 <= x < n:
                raise GraphFormatError(f"vertex {x} out of range", ln)
            if not 0 <= c < cc:
                raise GraphFormatError(f"color {c} out of range", ln)
            if vcolors[x] is not None:
                raise GraphFormatError(f"vertex {x} colored twice", ln)
            vcolors[x] = c
        body = body[n:]
    if len(body) != m:
        raise GraphFormatError(f"expected {m} edge lines, found {len(body)}",
                               body[-1][0] if body else lineno)
    proto = ColoredGraph(mode, n, (), cc, tuple(vcolors) if vcolors else None)
    edges = []
    width = 4 if mode == ECFT else 3
    for eid, (ln, tok) in enumerate(body):
        if len(tok) != width:
            if mode == VCFT and len(tok) == 4:
                raise GraphFormatError("vcft edge carries a color field", ln)
            raise GraphFormatError(f"edge line needs {width} fields", ln)
        u, v = _ints(tok[:2], ln)
        try:
            w = float(tok[2])
        except ValueError:
            raise GraphFormatError(f"bad weight {tok[2]!r}", ln) from None
        color = _ints(tok[3:], ln)[0] if mode == ECFT else None
        e = Edge(eid, u, v, w, color)
        _check_edge(proto, e, ln)
        edges.append(e)
    return ColoredGraph(mode, n, tuple(edges), cc, proto.vertex_colors)


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise GraphFormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def serialize_graph(g: ColoredGraph) -> str:
    """Canonical text form; ``parse_graph`` inverts it exactly."""
    out = [f"{g.mode} {g.n} {g.m} {g.color_count}"]
    if g.mode == VCFT:
        out += [f"{x} {c}" for x, c in enumerate(g.vertex_colors)]
    for e in sorted(g.edges, key=lambda e: e.id):
        tail = f" {e.color}" if g.mode == ECFT else ""
        out.append(f"{e.u} {e.v} {e.w!r}{tail}")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------ faults

def subtract_faults(g: ColoredGraph, F) -> ColoredGraph:
    colors = F.colors if isinstance(F, FaultSet) else frozenset(F)
    if not colors:
        return g
    return ColoredGraph(g.mode, g.n, tuple(e for e in g.edges if not g.damages(colors, e)),
                        g.color_count, g.vertex_colors)


# ---------------------------------------------------------- shortest paths

def distances_from(g: ColoredGraph, src: int, edges: Iterable[Edge] | None = None,
                   blocked_vertices=frozenset(), target: int | None = None) -> list[float]:
    """Dijkstra from ``src``. ``edges`` restricts the usable edge set."""
    if edges is None:
        adj = g.adjacency
    else:
        adj = [[] for _ in range(g.n)]
        for e in edges:
            adj[e.u].append(e)
            adj[e.v].append(e)
    dist = [INF] * g.n
    dist[src] = 0.0
    heap = [(0.0, src)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist[x]:
            continue
        if x == target:
            break
        for e in adj[x]:
            y = e.other(x)
            if y in blocked_vertices:
                continue
            nd = d + e.w
            if nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def shortest_distance(g: ColoredGraph, u: int, v: int) -> float:
    return distances_from(g, u, target=v)[v]


# --------------------------------------------------------------- generators

def generate_random(mode: str, n: int, m: int | None = None, *, density: float | None = None,
                    color_count: int = 2, weight_range=(1.0, 10.0), coloring: str = "uniform",
                    seed: int = 0, simple: bool = False, integer_weights: bool = False,
                    bias: float = 0.7) -> ColoredGraph:
    """Random colored graph, deterministic in ``seed``.

    ``coloring`` is ``uniform``, ``legal`` (proper edge coloring in ecft mode,
    proper vertex coloring in vcft mode) or ``monochromatic-biased`` (color 0
    with probability ``bias``). Parallel edges appear only when ``simple`` is
    false. Raises ValueError when a legal coloring cannot be realized.
    """
    if mode not in (ECFT, VCFT):
        raise ValueError(f"unknown mode {mode!r}")
    if coloring not in ("uniform", "legal", "monochromatic-biased"):
        raise ValueError(f"unknown coloring policy {coloring!r}")
    if n < 2 and (m or density):
        raise ValueError("need at least two vertices for edges")
    if color_count < 1:
        raise ValueError("need at least one color")
    if m is None:
        if density is None:
            raise ValueError("give m or density")
        m = int(round(density * n * (n - 1) / 2))
    pairs_total = n * (n - 1) // 2
    if simple and m > pairs_total:
        raise ValueError(f"a simple graph on {n} vertices has at most {pairs_total} edges")
    rng = np.random.default_rng(seed)
    lo, hi = weight_range
    if not 0 < lo <= hi:
        raise ValueError("weight range must satisfy 0 < lo <= hi")

    def draw_color():
        if coloring == "monochromatic-biased" and rng.random() < bias:
            return 0
        return int(rng.integers(color_count))

    def draw_weight():
        if integer_weights:
            return float(rng.integers(int(math.ceil(lo)), int(math.floor(hi)) + 1))
        return float(np.round(rng.uniform(lo, hi), 3))

    vcolors = None
    if mode == VCFT:
        vcolors = [draw_color() for _ in range(n)]
    used: list[set[int]] = [set() for _ in range(n)]
    pairs = set()
    raw = []
    attempts = 0
    while len(raw) < m:
        attempts += 1
        if attempts > 200 * (m + 10):
            raise ValueError("could not realize the requested graph (legal coloring infeasible?)")
        u, v = (int(x) for x in rng.integers(n, size=2))
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if simple and key in pairs:
            continue
        color = None
        if mode == ECFT:
            if coloring == "legal":
                free = sorted(set(range(color_count)) - used[u] - used[v])
                if not free:
                    continue
                color = free[int(rng.integers(len(free)))]
                used[u].add(color)
                used[v].add(color)
            else:
                color = draw_color()
        elif coloring == "legal" and vcolors[u] == vcolors[v]:
            continue
        pairs.add(key)
        raw.append((u, v, draw_weight(), color))
    edges = tuple(Edge(i, u, v, w, c) for i, (u, v, w, c) in enumerate(raw))
    return ColoredGraph(mode, n, edges, color_count, tuple(vcolors) if vcolors else None)


def from_edge_list(mode: str, n: int, edges: Sequence, color_count: int | None = None,
                   vertex_colors: Sequence[int] | None = None) -> ColoredGraph:
    """Build from ``(u, v, w[, color])`` tuples; ids follow list order."""
    es = []
    for i, t in enumerate(edges):
        u, v, w = t[:3]
        c = t[3] if mode == ECFT else None
        es.append(Edge(i, int(u), int(v), float(w), c))
    if color_count is None:
        cs = [e.color for e in es] if mode == ECFT else list(vertex_colors or [])
        color_count = max(cs, default=-1) + 1 or 1
    return ColoredGraph(mode, n, tuple(es), color_count,
                        tuple(vertex_colors) if vertex_colors is not None else None)


def is_legal_coloring(g: ColoredGraph) -> bool:
    if g.mode == VCFT:
        return all(g.vertex_colors[e.u] != g.vertex_colors[e.v] for e in g.edges)
    for x in range(g.n):
        cs = [e.color for e in g.adjacency[x]]
        if len(cs) != len(set(cs)):
            return False
    return True
