"""A direct two-level f-ECFT 3-spanner for simple graphs.

Level 0: every vertex u scans its edges by (weight, id) and keeps an edge
while its kept set stays under the caps ``L`` per color and ``2fL`` overall.
An edge that hits a cap is postponed with one of two attachments:

* same-color: one kept edge u-s of color c(e) with s a level-1 center,
* colorful: 2f kept edges u-s to level-1 centers with pairwise distinct colors.

Level 1: v stores two-hop paths v-u-s per center s, with at most
(2f)^(2-|J|) paths containing J and at most (2f)^(1-|J|) of them
monochromatic. A colorful edge is discarded when at least f+1 of its
attached edges cannot be stored; a same-color edge is discarded when its
single path cannot be stored. Everything else is kept.
"""

from __future__ import annotations

import math
from collections import Counter
from itertools import combinations

from .ecft import KEEP, PSTPN, SAFE, SpannerResult
from .errors import check
from .graph import ECFT, ColoredGraph
from .params import normalize_f, sample_center_levels
from .park import PathRec, prepend, zero_path
from .score import subsets

COLORFUL, SAME_COLOR = "colorful", "same-color"


def _one_edge(e, u) -> PathRec:
    return prepend(e, u, zero_path(e.other(u)), e.color)


class _CenterStore:
    """Per-center path store of the last level with the two counting caps."""

    def __init__(self, f: int):
        self.f = f
        self.paths: list[PathRec] = []
        self.count: Counter = Counter()
        self.mono: Counter = Counter()

    def cap(self, J) -> int:
        return (2 * self.f) ** (2 - len(J))

    def mono_cap(self, J) -> int:
        # only single-color paths are monochromatic, so |J| <= 1 here
        return (2 * self.f) ** (1 - len(J))

    def blocking(self, colors):
        """Subsets J of ``colors`` whose cap would break, with the failing kind."""
        out = []
        mono = len(colors) == 1
        for J in subsets(colors):
            if self.count[J] + 1 > self.cap(J):
                out.append((J, "all"))
            elif mono and self.mono[J] + 1 > self.mono_cap(J):
                out.append((J, "mono"))
        return out

    def add(self, p: PathRec):
        self.paths.append(p)
        mono = len(p.colors) == 1
        for J in subsets(p.colors):
            self.count[J] += 1
            if mono:
                self.mono[J] += 1
        check(not any(self.count[J] > self.cap(J) for J in subsets(p.colors)),
              "center store over its cap")


def _level0(g, f, L, adj, is_center):
    """Returns (per-vertex decisions, attachments, fallbacks)."""
    decisions, attach, fallbacks = {}, {}, Counter()
    for u in range(g.n):
        per_color, total = Counter(), 0
        stored: list = []
        dec = {}
        for e in adj[u]:
            if per_color[e.color] < L and total < 2 * f * L:
                per_color[e.color] += 1
                total += 1
                stored.append(e)
                dec[e.id] = KEEP
                continue
            hub = [x for x in stored if is_center(x.other(u))]
            same = [x for x in hub if x.color == e.color]
            if same:
                attach[(e.id, u)] = (SAME_COLOR, (_one_edge(same[0], u),))
                dec[e.id] = PSTPN
                continue
            first = {}
            for x in hub:
                first.setdefault(x.color, x)
            if len(first) >= 2 * f:
                chosen = sorted(first.values(), key=lambda x: x.key)[:2 * f]
                attach[(e.id, u)] = (COLORFUL, tuple(_one_edge(x, u) for x in chosen))
                dec[e.id] = PSTPN
            else:
                dec[e.id] = KEEP
                fallbacks["no colorful attachment"] += 1
        decisions[u] = dec
    return decisions, attach, fallbacks


def warmup_3spanner(g: ColoredGraph, f: int, seed: int = 0, cap_const: float = 0.25,
                    audit: bool = False) -> SpannerResult:
    """f-ECFT 3-spanner of a simple edge-colored graph."""
    if g.mode != ECFT:
        raise ValueError("the warm-up construction needs an edge-colored graph")
    if not g.is_simple():
        raise ValueError("the warm-up construction needs a simple graph (no parallel edges)")
    f = normalize_f(f)
    n = g.n
    p = min(1.0, n ** -0.5) if n > 1 else 1.0
    L = max(1, math.ceil(cap_const * math.ceil(math.log(max(n, 2))) / p))
    levels = sample_center_levels(n, 2, p, seed)
    adj = [sorted(a, key=lambda e: e.key) for a in g.adjacency]

    res = SpannerResult("warmup3", n, g.m, 2, f, ())
    decisions, attach, fallbacks = _level0(g, f, L, adj, lambda s: levels[s] >= 1)
    res.fallbacks.update(fallbacks)
    kept = set()
    E1 = []
    for e in g.edges:
        du, dv = decisions[e.u][e.id], decisions[e.v][e.id]
        if KEEP in (du, dv):
            kept.add(e.id)
        else:
            E1.append(e)
    res.level_counts.append({u: Counter(d.values()) for u, d in decisions.items()})
    support = set(kept)

    cases = Counter()
    replays = 0
    level1 = {}
    E1_ids = {e.id for e in E1}
    for v in range(n):
        mine = [e for e in adj[v] if e.id in E1_ids]
        if not mine:
            continue
        stores: dict[int, _CenterStore] = {}
        kept_here: set = set()
        dec = Counter()
        for e in mine:
            u = e.other(v)
            kind, paths = attach[(e.id, u)]
            if kind == COLORFUL:
                same = [P for P in paths if P.colors == (e.color,)]
                if same:
                    kind, paths = SAME_COLOR, (same[0],)
            cases[kind] += 1
            ext = [prepend(e, v, P, e.color) for P in paths]
            votes = [not stores.setdefault(q.end, _CenterStore(f)).blocking(q.colors) for q in ext]
            n_safe = votes.count(False)
            safe = n_safe >= f + 1 if kind == COLORFUL else n_safe == 1
            if safe:
                dec[SAFE] += 1
                if audit:
                    voters = [q for q, ok in zip(ext, votes) if not ok]
                    replays += _replay(g, e, voters, stores, f, support | kept_here)
                continue
            dec[KEEP] += 1
            kept_here.add(e.id)
            for q, ok in zip(ext, votes):
                if ok:
                    stores[q.end].add(q)
        kept |= kept_here
        level1[v] = dec
    res.level_counts.append(level1)
    res.kept = tuple(sorted(kept))
    res.extra.update({"cap_per_color": L, "level1_edges": len(E1),
                      "cases": dict(sorted(cases.items())),
                      "centers": sum(1 for x in levels if x >= 1), "replayed_fault_sets": replays})
    return res


def _replay(g, e, voters, stores, f, support) -> int:
    """Rebuild a surviving u-v walk of at most three edges for every fault set
    that spares c(e). Returns the number of fault sets checked."""
    colors = {c for q in voters for c in q.colors}
    for q in voters:
        colors.update(c for P in stores[q.end].paths for c in P.colors)
    pool = sorted(colors - {e.color})
    checked = 0
    for r in range(min(f, len(pool)) + 1):
        for F in combinations(pool, r):
            Fs = set(F)
            checked += 1
            first = next((q for q in voters if not Fs & set(q.colors)), None)
            check(first is not None, "every safe voter is faulty", e.id, F)
            store = stores[first.end]
            walk = None
            for J, kind in store.blocking(first.colors):
                cand = [P for P in store.paths if set(J) <= set(P.colors)
                        and (kind == "all" or len(P.colors) == 1)]
                P2 = next((P for P in cand if not Fs & set(P.colors)), None)
                if P2 is not None:
                    walk = first.edge_ids[1:] + P2.edge_ids
                    break
            check(walk is not None, "no surviving stored path at the shared center", e.id, F)
            check(len(walk) <= 3, "replayed walk too long", e.id)
            for eid in walk:
                x = g.edge_by_id[eid]
                check(eid in support, "replayed walk leaves the spanner", e.id, eid)
                check(x.w <= e.w, "replayed walk uses a heavier edge", e.id, eid)
                check(x.color not in Fs, "replayed walk uses a faulty edge", e.id, eid)
    return checked
