"""Reference constructions to compare against.

* :func:`baswana_sen` - the classic randomized (2k-1)-spanner, edge-centric.
* :func:`parter_vft` - f-vertex-fault-tolerant spanner with 8kf disjoint
  attachment paths per edge endpoint.
* :func:`greedy_cft` - exponential greedy for color faults; keeps an edge
  whenever some admissible fault set stretches it too far.

The two randomized drivers expose the same level hooks as the main engine,
so the distributed simulator can run them unchanged. Their attachments are
tuples of path records.
"""

from __future__ import annotations

import math
from collections import Counter
from itertools import combinations
from math import comb

from .ecft import KEEP, PSTPN, SAFE, GlobalView, LevelHooks, SpannerResult
from .errors import BudgetExceeded, check
from .graph import ColoredGraph, distances_from
from .params import normalize_f, sample_center_levels, sampling_probability, vote_rng
from .park import PathRec, zero_path


def _extend(e, v, P: PathRec) -> PathRec:
    """Uncolored ``e o P``."""
    return PathRec((e.id,) + P.edge_ids, (v,) + P.vertices, (), max(e.w, P.max_weight))


class _Driver:
    """Shared level loop: attachments in, per-vertex decisions out."""

    algo = ""

    def __init__(self, g: ColoredGraph, k: int, p: float, seed: int):
        self.g, self.k, self.seed = g, k, seed
        self.center_levels = sample_center_levels(g.n, k, p, seed)
        self.view = GlobalView(g, self.center_levels)
        self.kept: set[int] = set()
        self.undecided: dict[int, dict[int, tuple]] = {}
        self.result = SpannerResult(self.algo, g.n, g.m, k, 0, ())
        self.adj = [sorted(a, key=lambda e: e.key) for a in g.adjacency]

    def initial(self, u) -> tuple:
        raise NotImplementedError

    def process(self, v, i, items, view) -> tuple[dict, dict]:
        """Decide ``items`` = [(edge, far attachment)]; returns (decisions, new attachments)."""
        raise NotImplementedError

    def run(self, hooks: LevelHooks | None = None) -> SpannerResult:
        hooks = hooks or LevelHooks()
        g = self.g
        self.undecided = {e.id: {e.u: self.initial(e.u), e.v: self.initial(e.v)}
                          for e in g.edges}
        for i in range(self.k):
            hooks.level_start(i, self.undecided, self)
            decisions, attachments, counts = {}, {}, {}
            for v in range(g.n):
                items = [(e, self.undecided[e.id][e.other(v)]) for e in self.adj[v]
                         if e.id in self.undecided]
                if not items:
                    continue
                dec, att = self.process(v, i, items, hooks.view_for(v, i, self))
                decisions[v] = dec
                attachments[v] = att
                counts[v] = Counter(dec.values())
            nxt = {}
            for eid, ends in self.undecided.items():
                ds = [decisions[x][eid] for x in ends]
                if KEEP in ds:
                    self.kept.add(eid)
                elif all(d == PSTPN for d in ds):
                    nxt[eid] = {x: attachments[x][eid] for x in ends}
            self.result.level_counts.append(counts)
            self.undecided = nxt
            hooks.level_end(i, self)
        check(not self.undecided, "edges left undecided after the last level")
        self.result.kept = tuple(sorted(self.kept))
        return self.result


# ------------------------------------------------------------ Baswana-Sen

class _BaswanaSen(_Driver):
    algo = "baswana-sen"

    def __init__(self, g, k, seed, c_g):
        p = sampling_probability(g.n, k)
        super().__init__(g, k, p, seed)
        self.cap = max(1, math.ceil(c_g * math.ceil(math.log(max(g.n, 2))) / p))
        self.result.extra["cap"] = self.cap

    def initial(self, u):
        return (zero_path(u),)

    def process(self, v, i, items, view):
        last = i == self.k - 1
        store: dict[int, PathRec] = {}
        dec, att = {}, {}
        for e, (P,) in items:
            q = _extend(e, v, P)
            if q.end in store:
                dec[e.id] = SAFE
            elif len(store) < self.cap or last:
                store[q.end] = q
                dec[e.id] = KEEP
            else:
                onward = next((x for x in store.values()
                               if view.center_level(x.end) >= i + 1), None)
                if onward is None:
                    dec[e.id] = KEEP
                    self.result.fallbacks["no next-level center"] += 1
                else:
                    dec[e.id] = PSTPN
                    att[e.id] = (onward,)
        return dec, att


def baswana_sen(g: ColoredGraph, k: int, seed: int = 0, c_g: float = 4,
                hooks: LevelHooks | None = None) -> SpannerResult:
    """Plain (2k-1)-spanner; colors are ignored."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return _BaswanaSen(g, k, seed, c_g).run(hooks)


# ----------------------------------------------------------- Parter's VFT

class _ParterVFT(_Driver):
    algo = "parter-vft"

    def __init__(self, g, f, k, seed, c, voting, c_s, audit):
        p = sampling_probability(g.n, k, f, vertex_faults=True)
        super().__init__(g, k, p, seed)
        self.f, self.voting, self.audit = f, voting, audit
        self.need = 8 * k * f
        self.cap = max(self.need, math.ceil(c * k * f * math.ceil(math.log(max(g.n, 2))) / p))
        self.draws = c_s * max(1, math.ceil(math.log(max(g.n, 2))))
        self.result.f = f
        self.result.extra.update({"cap": self.cap, "paths_per_attachment": self.need,
                                  "replayed_safe": 0, "min_surviving_walks": None})

    def initial(self, u):
        return (zero_path(u),) * self.need

    def process(self, v, i, items, view):
        last = i == self.k - 1
        store: list[PathRec] = []
        used: set[int] = set()
        support = set(self.kept)
        rng = vote_rng(self.seed, i, v) if self.voting == "sampled" else None
        dec, att = {}, {}
        for e, paths in items:
            u = e.other(v)
            if len(store) >= self.cap and not last:
                onward = [q for q in store if view.center_level(q.end) >= i + 1]
                if len(onward) >= self.need:
                    dec[e.id] = PSTPN
                    att[e.id] = tuple(onward[:self.need])
                else:
                    dec[e.id] = KEEP
                    support.add(e.id)
                    self.result.fallbacks["too few next-level paths"] += 1
                continue
            if self.voting == "sampled":
                pool = [paths[int(rng.integers(len(paths)))] for _ in range(self.draws)]
            else:
                pool = paths
            free = next((P for P in pool if v not in P.vertices and used.isdisjoint(P.vertices)),
                        None)
            if free is not None:
                q = _extend(e, v, free)
                store.append(q)
                used.update(q.vertices[1:])
                dec[e.id] = KEEP
                support.add(e.id)
            elif u in used:
                dec[e.id] = KEEP
                support.add(e.id)
            else:
                dec[e.id] = SAFE
                if self.audit:
                    self._replay(e, v, paths, store, support, i)
        return dec, att

    def _replay(self, e, v, paths, store, support, i):
        """Pair attachment paths with stored paths, join each pair at a shared
        vertex, and check that every fault set of at most f vertices other
        than u, v spares enough of the joined walks."""
        u = e.other(v)
        left = list(paths)
        walks = []
        while left:
            pair = None
            for P in left:
                for Q in store:
                    hit = next((x for x in P.vertices if x in Q.vertices), None)
                    if hit is not None:
                        pair = (P, Q, hit)
                        break
                if pair:
                    break
            if pair is None:
                break
            P, Q, x = pair
            a, b = P.vertices.index(x), Q.vertices.index(x)
            walk_edges = P.edge_ids[:a] + Q.edge_ids[:b]
            walk_vertices = set(P.vertices[:a + 1]) | set(Q.vertices[:b + 1])
            check(len(walk_edges) <= 2 * i + 1, "joined walk too long", e.id)
            for eid in walk_edges:
                check(eid in support, "joined walk leaves the spanner", e.id, eid)
                check(self.g.edge_by_id[eid].w <= e.w, "joined walk uses a heavier edge", e.id)
            walks.append(walk_vertices - {u, v})
            Qv = set(Q.vertices)
            left = [R for R in left if Qv.isdisjoint(R.vertices)]
        hot = sorted(set().union(*walks)) if walks else []
        worst = len(walks)
        for r in range(1, min(self.f, len(hot)) + 1):
            for F in combinations(hot, r):
                Fs = set(F)
                worst = min(worst, sum(1 for w in walks if Fs.isdisjoint(w)))
        floor = self.f + 1 if self.voting == "exact" else 1
        check(worst >= floor, "too few joined walks survive some vertex fault set", e.id, worst)
        ex = self.result.extra
        ex["replayed_safe"] += 1
        ex["min_surviving_walks"] = worst if ex["min_surviving_walks"] is None \
            else min(ex["min_surviving_walks"], worst)


def parter_vft(g: ColoredGraph, f: int, k: int, voting: str = "exact", seed: int = 0,
               c: float = 1, c_s: int = 48, audit: bool = False,
               hooks: LevelHooks | None = None) -> SpannerResult:
    """f-vertex-fault-tolerant (2k-1)-spanner of a simple graph."""
    if not g.is_simple():
        raise ValueError("parter_vft needs a simple graph (no parallel edges)")
    if voting not in ("exact", "sampled"):
        raise ValueError(f"unknown voting mode {voting!r}")
    if k < 1:
        raise ValueError("k must be at least 1")
    f = normalize_f(f)
    return _ParterVFT(g, f, k, seed, c, voting, c_s, audit).run(hooks)


# ---------------------------------------------------------------- greedy

def greedy_cft(g: ColoredGraph, f: int, k: int, budget: int = 200_000) -> SpannerResult:
    """Keep e iff some admissible fault set leaves u, v more than (2k-1) w(e) apart in H.

    Only maximal fault sets (size min(f, colors available)) are tried: more
    faults never shorten a distance.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    t = 2 * k - 1
    colors = range(g.color_count)
    per_edge = comb(g.color_count, min(f, g.color_count))
    if per_edge * g.m > budget:
        raise BudgetExceeded(f"{per_edge * g.m} fault-set checks exceed the budget of {budget}")
    H: list = []
    checks = 0
    for e in sorted(g.edges, key=lambda e: e.key):
        dmg = set(g.edge_colors(e))
        pool = [c for c in colors if c not in dmg]
        need = False
        for F in combinations(pool, min(f, len(pool))):
            checks += 1
            Fs = set(F)
            alive = [x for x in H if not g.damages(Fs, x)]
            d = distances_from(g, e.u, alive, target=e.v)[e.v]
            if d > t * e.w:
                need = True
                break
        if need:
            H.append(e)
    res = SpannerResult("greedy", g.n, g.m, k, f, tuple(sorted(x.id for x in H)))
    res.extra["fault_set_checks"] = checks
    return res
