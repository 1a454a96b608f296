"""Color fault-tolerant (2k-1)-spanners by edge-centric clustering with parks.

The construction runs k levels. At level i every undecided edge e = {v, u}
carries, for each endpoint, an attachment: a touristic park of i-hop paths
from that endpoint to level-i centers, full on a witness color set I. Each
vertex v walks its undecided edges by (weight, id) and lets every attached
path of the far endpoint vote:

* ``safe``  if v already stores enough paths to the same center on some
  subset of the extended path's colors (local fullness),
* ``pstpn`` if v's store is globally full on such a subset,
* ``keep``  otherwise.

The edge follows whichever vote class carries at least 1/8 of the I-score
(safe first, then keep, then pstpn). Kept edges enter the spanner and their
extended paths enter v's store. Postponed edges get a fresh attachment from
park sampling and move on to the next level if the other endpoint postponed
them too. Every step that only succeeds with high probability falls back to
keeping the edge, so the output is always a valid spanner.

The same engine serves vertex colors (see :mod:`cftspan.vcft`); only the
color bookkeeping of path extension differs.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .errors import LemmaViolation, check
from .graph import ECFT, ColoredGraph, Edge
from .park import Park, PathRec, TouristicPark, is_walk, prepend, recomputed_colors, \
    sample_weighted, surviving_path, zero_path
from .params import LevelConfig, SpannerConfig, level_config, normalize_f, \
    sample_center_levels, vote_rng
from .sampler import park_sample
from .score import colorset

SAFE, KEEP, PSTPN = "safe", "keep", "pstpn"
PRIORITY = (SAFE, KEEP, PSTPN)
EIGHTH = Fraction(1, 8)


# ----------------------------------------------------------------- results

@dataclass
class SpannerResult:
    algo: str
    n: int
    m: int
    k: int
    f: int
    kept: tuple[int, ...]
    level_counts: list = field(default_factory=list)
    fallbacks: Counter = field(default_factory=Counter)
    sampler: Counter = field(default_factory=Counter)
    clamps: int = 0
    trace: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def stretch(self) -> int:
        return 2 * self.k - 1

    @property
    def size(self) -> int:
        return len(self.kept)

    def spanner_text(self) -> str:
        return f"spanner {self.k} {self.f} {self.stretch}\n" + "".join(f"{e}\n" for e in self.kept)

    def level_totals(self) -> list[dict[str, int]]:
        out = []
        for per_vertex in self.level_counts:
            tot = Counter()
            for c in per_vertex.values():
                tot.update(c)
            out.append({d: tot.get(d, 0) for d in PRIORITY})
        return out

    def report(self) -> dict:
        rep = {"algo": self.algo, "n": self.n, "m": self.m, "k": self.k, "f": self.f,
               "size": self.size, "levels": self.level_totals(),
               "fallbacks": dict(sorted(self.fallbacks.items())),
               "sampler": dict(sorted(self.sampler.items())), "clamps": self.clamps}
        rep.update(self.extra)
        return rep


def parse_spanner(text: str) -> tuple[int, int, list[int]]:
    """Read a spanner file back: (k, f, kept edge ids)."""
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows or not rows[0].startswith("spanner"):
        raise ValueError("spanner file must start with 'spanner <k> <f> <stretch>'")
    head = rows[0].split()
    if len(head) != 4:
        raise ValueError("spanner header needs k, f and stretch")
    k, f = int(head[1]), int(head[2])
    return k, f, [int(r) for r in rows[1:]]


# ------------------------------------------------------------ color rules

class ColorRule:
    """How colors flow along paths: edge colors or vertex colors."""

    def __init__(self, vertex: bool):
        self.vertex = vertex

    def zero_colors(self, u, view):
        return (view.vcolor(u),) if self.vertex else ()

    def step_color(self, e: Edge, v, view):
        return view.vcolor(v) if self.vertex else e.color

    def damage(self, e: Edge, view):
        if self.vertex:
            return colorset((view.vcolor(e.u), view.vcolor(e.v)))
        return (e.color,)

    def witness_pool(self, e: Edge, v, view):
        return self.damage(e, view)

    def normalize(self, T, v, view):
        return colorset(T + (view.vcolor(v),)) if self.vertex else T

    def keep_link(self, v, view):
        """Link on which a regular keep provably adds mass to v's store."""
        return (view.vcolor(v),) if self.vertex else ()


class GlobalView:
    """Unrestricted read access, used by sequential runs."""

    def __init__(self, g: ColoredGraph, center_levels):
        self.g = g
        self.levels = center_levels

    def vcolor(self, x):
        return self.g.vertex_colors[x]

    def center_level(self, x):
        return self.levels[x]


@dataclass
class Attachment:
    park: TouristicPark
    witness: tuple


@dataclass
class Vote:
    dcsn: str
    votes: dict
    scores: dict
    sampled: bool = False
    draws: int = 0


# ----------------------------------------------------------------- voting

def classify(hat: TouristicPark, v, e, P: PathRec, rule: ColorRule, view,
             allow_postpone=True) -> str:
    step = rule.step_color(e, v, view)
    cs = P.colors if step in P.colors else colorset(P.colors + (step,))
    local = hat.locals.get(P.end)
    if local is not None and len(local) and local.find_full_subset(cs) is not None:
        return SAFE
    if allow_postpone and hat.global_.find_full_subset(cs) is not None:
        return PSTPN
    return KEEP


def _mass(lc: LevelConfig, paths, I) -> Fraction:
    gs = lc.gsc
    Iset = set(I)
    return sum((gs.weight(len(p.colors) - len(I)) for p in paths if Iset <= set(p.colors)),
               Fraction(0))


def exact_votes(hat, v, e, att, lc, rule, view, allow_postpone=True) -> Vote:
    votes = {d: [] for d in PRIORITY}
    for P in att.park:
        votes[classify(hat, v, e, P, rule, view, allow_postpone)].append(P)
    scores = {d: _mass(lc, votes[d], att.witness) for d in PRIORITY}
    dcsn = next((d for d in PRIORITY if scores[d] >= EIGHTH), None)
    check(dcsn is not None, "no vote class reaches 1/8 of an I-full attachment", scores)
    return Vote(dcsn, votes, scores)


def decide_edge(hat: TouristicPark, v, e: Edge, att: Attachment, lc: LevelConfig,
                rule: ColorRule, view, voting: str = "exact", rng=None, draws: int = 0,
                allow_postpone: bool = True) -> Vote:
    """Decide one edge at ``v`` against the far endpoint's attachment ``att``.

    Sampled voting estimates the three vote masses from ``draws`` weighted
    samples. A sampled ``safe`` is accepted only if the exact safe mass
    clears 1/alpha (what the fault-tolerance argument needs); ``keep`` needs
    the exact keep voters anyway, so those two outcomes end in an exact pass.
    """
    if voting == "exact":
        return exact_votes(hat, v, e, att, lc, rule, view, allow_postpone)
    total = att.park.global_.score(att.witness)
    tally = Counter()
    for _ in range(draws):
        P = sample_weighted(att.park.global_, att.witness, rng)
        tally[classify(hat, v, e, P, rule, view, allow_postpone)] += 1
    est = {d: total * Fraction(tally[d], draws) for d in PRIORITY}
    dcsn = next((d for d in PRIORITY if est[d] >= EIGHTH), None)
    if dcsn == PSTPN:
        return Vote(PSTPN, {d: [] for d in PRIORITY}, est, sampled=True, draws=draws)
    exact = exact_votes(hat, v, e, att, lc, rule, view, allow_postpone)
    if dcsn == SAFE and exact.scores[SAFE] <= Fraction(1, lc.alpha):
        return exact
    if dcsn in (SAFE, KEEP):
        return Vote(dcsn, exact.votes, est, sampled=True, draws=draws)
    return exact


# ---------------------------------------------------------- vertex procedure

@dataclass
class VertexOutcome:
    v: int
    decisions: dict = field(default_factory=dict)
    attachments: dict = field(default_factory=dict)
    fallbacks: Counter = field(default_factory=Counter)
    sampler: Counter = field(default_factory=Counter)
    clamps: int = 0
    trace: list = field(default_factory=list)
    hat: TouristicPark | None = None


def keep_increment_bound(lc: LevelConfig) -> Fraction:
    """Least ghat mass a regular keep adds to the store."""
    return EIGHTH * (lc.beta_hat * lc.rho / lc.beta) / (lc.alpha_hat * lc.f)


def process_vertex(v, items, lc: LevelConfig, nxt: LevelConfig | None, rule: ColorRule, view,
                   cfg: SpannerConfig, support: set | None = None,
                   edge_of: Callable | None = None) -> VertexOutcome:
    """Run level ``lc.i`` at vertex ``v`` over ``items`` = [(edge, far attachment)].

    ``support`` (audit only) is the edge set of the spanner before this level;
    it is used to replay every safe decision constructively.
    """
    out = VertexOutcome(v)
    hat = TouristicPark(v, lc.ghat, lc.lhat)
    out.hat = hat
    rng = vote_rng(cfg.seed, lc.i, v)
    draws = cfg.sample_const * max(1, math.ceil(math.log(max(lc.n, 2))))
    cache: dict = {}
    kept_here: set = set()
    regular_keeps = 0
    min_inc = keep_increment_bound(lc)
    link0 = rule.keep_link(v, view)
    for e, att in items:
        if cfg.audit:
            heaviest = max((p.max_weight for p in hat), default=0.0)
            check(heaviest <= e.w, "store holds a path heavier than the edge being processed",
                  e.id, heaviest)
        vote = decide_edge(hat, v, e, att, lc, rule, view, cfg.voting, rng, draws)
        d, why = vote.dcsn, ""
        if d == PSTPN:
            d, why = _postpone(out, hat, v, e, lc, nxt, rule, view, cfg, cache)
        if d == KEEP:
            keepers = vote.votes[KEEP]
            if why and vote.sampled:
                keepers = exact_votes(hat, v, e, att, lc, rule, view).votes[KEEP]
            extended = [prepend(e, v, P, rule.step_color(e, v, view)) for P in keepers]
            before = hat.global_.score(link0)
            clamped = sum(hat.insert(p, clamp=True) == "clamped" for p in extended)
            out.clamps += clamped
            if clamped and lc.paper:
                raise LemmaViolation(f"store at {v} overflowed at level {lc.i} (edge {e.id})")
            kept_here.add(e.id)
            if not why and cfg.audit and _mass(lc, keepers, att.witness) >= EIGHTH:
                gain = sum((lc.ghat.weight(len(p.colors) - len(link0)) for p in extended
                            if set(link0) <= set(p.colors)), Fraction(0))
                check(gain >= min_inc, "keep added too little mass", e.id, gain, min_inc)
                if not clamped:
                    regular_keeps += 1
                    check(hat.global_.score(link0) - before == gain, "store mass bookkeeping")
                    check(regular_keeps * min_inc <= hat.global_.score(link0) <= 1,
                          "keep count exceeds the store capacity", regular_keeps)
        elif d == SAFE and cfg.audit and support is not None:
            replay_safe(hat, v, e, att, vote.votes[SAFE], lc, rule, view,
                        support | kept_here, edge_of)
        out.decisions[e.id] = d
        if why:
            out.fallbacks[why] += 1
        if cfg.trace:
            out.trace.append((lc.i, v, e.id, d, why))
    if cfg.audit:
        hat.audit()
    return out


def _postpone(out, hat, v, e, lc, nxt, rule, view, cfg, cache):
    if nxt is None:
        return KEEP, "last-level postpone"
    T = hat.global_.find_full_subset(rule.witness_pool(e, v, view))
    if T is None:
        if lc.paper:
            raise LemmaViolation(f"postponed edge {e.id} at {v} has no full witness link")
        return KEEP, "no witness"
    T = rule.normalize(T, v, view)
    version = (len(hat), hat.clamped)
    hit = cache.get(T)
    if hit is not None and (hit[0].ok or hit[1] == version):
        so = hit[0]
        out.sampler["reused"] += 1
    else:
        nxt_level = lc.i + 1
        so = park_sample(hat, T, lambda s: view.center_level(s) >= nxt_level, lc, nxt,
                         audit=cfg.audit)
        cache[T] = (so, version)
        out.sampler["calls"] += 1
        out.sampler["full" if so.ok else "fallback"] += 1
        out.sampler["errors"] += so.error_events
        out.sampler["iterations"] += so.iterations
    if not so.ok:
        return KEEP, "sampler fallback"
    out.attachments[e.id] = Attachment(so.park, T)
    return PSTPN, ""


def fault_sets(colors, f, avoid=()):
    pool = [c for c in colors if c not in set(avoid)]
    for r in range(min(f, len(pool)) + 1):
        yield from combinations(pool, r)


def replay_safe(hat, v, e, att, safe_paths, lc, rule, view, support, edge_of):
    """Rebuild, for every admissible fault set, a surviving u-v walk of at most
    2i+1 edges, each no heavier than e, inside the current spanner."""
    u = e.other(v)
    I = att.witness
    pk = Park(lc.gsc)
    for P in safe_paths:
        pk.add(P)
    check(pk.score(I) > Fraction(1, lc.alpha), "safe voters too light for fault tolerance")
    avoid = rule.damage(e, view)
    colors = set()
    for P in safe_paths:
        colors.update(P.colors)
    for local in hat.locals.values():
        for p in local:
            colors.update(p.colors)
    step = rule.step_color(e, v, view)
    for F in fault_sets(sorted(colors), lc.f, avoid):
        P1 = surviving_path(pk, I, F)
        s = P1.end
        cs = colorset(P1.colors + (step,))
        J = hat.locals[s].find_full_subset(cs)
        check(J is not None, "safe voter lost its local witness", e.id)
        P2 = surviving_path(hat.locals[s], J, F)
        walk = P1.edge_ids + P2.edge_ids
        check(len(walk) <= 2 * lc.i + 1, "replayed walk too long", e.id, walk)
        check(P1.start == u and P2.start == v and P2.end == s, "replayed walk does not join")
        for eid in walk:
            check(eid in support, "replayed walk leaves the spanner", e.id, eid)
            if edge_of is not None:
                check(edge_of(eid).w <= e.w, "replayed walk uses a heavier edge", e.id, eid)


# ------------------------------------------------------------------ driver

class LevelHooks:
    """Observer/override points used by the distributed simulator."""

    def level_start(self, i, undecided, engine):
        pass

    def view_for(self, v, i, engine):
        return engine.view

    def level_end(self, i, engine):
        pass

    def exchange(self, i, name, payload, engine):
        """One extra synchronous round carrying a small per-vertex value."""


class Engine:
    def __init__(self, g: ColoredGraph, f: int, k: int, cfg: SpannerConfig, vertex: bool,
                 algo: str):
        self.g, self.f, self.k, self.cfg = g, f, k, cfg
        self.rule = ColorRule(vertex)
        self.vertex = vertex
        self.algo = algo
        self.levels = [level_config(g.n, k, f, i, cfg, vertex_faults=vertex) for i in range(k)]
        self.center_levels = sample_center_levels(g.n, k, self.levels[0].p, cfg.seed)
        self.view = GlobalView(g, self.center_levels)
        self.kept: set[int] = set()
        self.result = SpannerResult(algo, g.n, g.m, k, f, ())
        self.undecided: dict[int, dict[int, Attachment]] = {}
        self.last_level: Callable | None = None

    def initial_attachment(self, u, view) -> Attachment:
        lc = self.levels[0]
        tp = TouristicPark(u, lc.gsc, lc.lsc)
        zp = zero_path(u, self.rule.zero_colors(u, view))
        tp.insert(zp, clamp=False)
        return Attachment(tp, zp.colors)

    def audit_attachments(self, i):
        lc = self.levels[i]
        g = self.g
        for eid, ends in self.undecided.items():
            e = g.edge_by_id[eid]
            for x, att in ends.items():
                tp = att.park
                check(tp.stem == x, "attachment stems from the wrong vertex")
                check(tp.global_.params == lc.gsc and tp.local_params == lc.lsc,
                      "attachment scored with the wrong parameters")
                tp.audit()
                check(tp.global_.is_full(att.witness), "attachment not full on its witness",
                      eid, x)
                dmg = set(self.rule.damage(e, self.view))
                check(set(att.witness) <= dmg, "witness outside the damaging colors")
                if self.vertex:
                    check(g.vertex_colors[x] in att.witness, "witness misses the owner color")
                for p in tp:
                    check(p.hop_len == i and p.start == x, "attachment path has wrong shape")
                    check(self.center_levels[p.end] >= i, "attachment path misses the centers")
                    check(p.max_weight <= e.w, "attachment path heavier than its edge")
                    check(is_walk(g, p) and recomputed_colors(g, p) == p.colors,
                          "attachment path is not a correctly colored walk")
                    check(all(q in self.kept for q in p.edge_ids),
                          "attachment path leaves the spanner")
                    if self.vertex:
                        check(g.vertex_colors[x] in p.colors and
                              g.vertex_colors[p.end] in p.colors, "vertex colors missing")

    def run(self, hooks: LevelHooks | None = None) -> SpannerResult:
        g, cfg = self.g, self.cfg
        hooks = hooks or LevelHooks()
        self.undecided = {e.id: {e.u: self.initial_attachment(e.u, self.view),
                                 e.v: self.initial_attachment(e.v, self.view)}
                          for e in g.edges}
        for i in range(self.k):
            last = i == self.k - 1
            if cfg.audit:
                self.audit_attachments(i)
            hooks.level_start(i, self.undecided, self)
            if last and self.last_level is not None:
                self.last_level(self, i, hooks)
                hooks.level_end(i, self)
                break
            self.run_level(i, hooks)
            hooks.level_end(i, self)
        self.result.kept = tuple(sorted(self.kept))
        return self.result

    def incidence(self, edge_ids=None) -> dict[int, list]:
        """Per vertex: undecided edges (or the given subset) in processing order."""
        g = self.g
        inc: dict[int, list] = {}
        for eid in (self.undecided if edge_ids is None else edge_ids):
            e = g.edge_by_id[eid]
            for x in self.undecided[eid]:
                inc.setdefault(x, []).append(e)
        for x in inc:
            inc[x].sort(key=lambda e: e.key)
        return inc

    def run_level(self, i, hooks):
        lc = self.levels[i]
        nxt = level_config(self.g.n, self.k, self.f, i + 1, self.cfg, self.vertex) \
            if i + 1 < self.k else None
        support = set(self.kept) if self.cfg.audit else None
        outcomes = {}
        inc = self.incidence()
        for v in sorted(inc):
            items = [(e, self.undecided[e.id][e.other(v)]) for e in inc[v]]
            view = hooks.view_for(v, i, self)
            outcomes[v] = process_vertex(v, items, lc, nxt, self.rule, view, self.cfg,
                                         support, self.g.edge_by_id.__getitem__)
        self.absorb(i, outcomes)

    def absorb(self, i, outcomes):
        counts = {}
        nxt_undecided = {}
        for v, oc in outcomes.items():
            counts[v] = Counter(oc.decisions.values())
            self.result.fallbacks.update(oc.fallbacks)
            self.result.sampler.update(oc.sampler)
            self.result.clamps += oc.clamps
            self.result.trace.extend(oc.trace)
        for eid, ends in self.undecided.items():
            ds = {x: outcomes[x].decisions[eid] for x in ends}
            if KEEP in ds.values():
                self.kept.add(eid)
            elif all(d == PSTPN for d in ds.values()):
                nxt_undecided[eid] = {x: outcomes[x].attachments[eid] for x in ends}
        self.result.level_counts.append(counts)
        self.undecided = nxt_undecided


def build_ecft_spanner(g: ColoredGraph, f: int, k: int, cfg: SpannerConfig | None = None,
                       hooks: LevelHooks | None = None) -> SpannerResult:
    """f-fault-tolerant (2k-1)-spanner against edge-color faults."""
    if g.mode != ECFT:
        raise ValueError("build_ecft_spanner needs an edge-colored graph")
    cfg = cfg or SpannerConfig()
    f = normalize_f(f)
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return SpannerResult("ecft", g.n, g.m, k, f, tuple(sorted(e.id for e in g.edges)))
    return Engine(g, f, k, cfg, vertex=False, algo="ecft").run(hooks)
