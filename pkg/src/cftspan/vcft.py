"""Vertex-color fault tolerance.

Levels 0..k-2 reuse the edge-color engine with vertex-color bookkeeping: a
path's colors are the colors of all its vertices, a zero-length path at u
already carries c(u), and extending a path by an edge at v adds c(v).

The last level differs. Each remaining edge is handled by one endpoint only
(the one whose color class looks smaller), voting is two-way (safe or keep),
and the stores only enforce their per-center parks. Kept edges are typed:
type 1 when the far attachment is full on {c(u)} alone, type 2 when it needs
{c(u), c(v)}. The potentials used to bound the number of type-1 and type-2
keeps are tracked and their per-keep growth is checked.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

from .ecft import EIGHTH, KEEP, SAFE, Engine, LevelHooks, SpannerResult, _mass, \
    decide_edge, replay_safe
from .errors import check
from .graph import VCFT, ColoredGraph
from .params import SpannerConfig, normalize_f, vote_rng
from .park import TouristicPark, prepend
from .score import colorset


def charge_edges(engine: Engine, i: int, symmetry: str, hooks: LevelHooks) -> dict[int, list]:
    """Assign every remaining edge to one endpoint; returns vertex -> edges."""
    g = engine.g
    charged: dict[int, list] = {}
    if symmetry == "sequential":
        size = Counter(g.vertex_colors)
        rank = {x: (size[g.vertex_colors[x]], x) for x in range(g.n)}
    else:
        ytilde: dict[int, set] = {}
        for eid, ends in engine.undecided.items():
            for x, att in ends.items():
                # x's attachment is received by the other endpoint y
                y = g.edge_by_id[eid].other(x)
                view = hooks.view_for(y, i, engine)
                cy = view.vcolor(y)
                ys = ytilde.setdefault(y, set())
                for p in att.park:
                    s = p.end
                    if view.vcolor(s) == cy and view.center_level(s) >= i:
                        ys.add(s)
        sizes = {x: len(s) for x, s in ytilde.items()}
        hooks.exchange(i, "ytilde", sizes, engine)
        rank = {x: (sizes.get(x, 0), x) for x in range(g.n)}
        engine.result.extra.setdefault("ytilde_max", max(sizes.values(), default=0))
    for eid in engine.undecided:
        e = g.edge_by_id[eid]
        x = min(e.u, e.v, key=lambda z: rank[z])
        charged.setdefault(x, []).append(e)
        if symmetry == "distributed" and engine.cfg.audit:
            other = e.other(x)
            c_other = g.vertex_colors[other]
            centers = sum(1 for s in range(g.n) if engine.center_levels[s] >= i
                          and g.vertex_colors[s] == c_other)
            check(centers >= rank[x][0], "charged endpoint has too many same-colored centers",
                  eid, centers, rank[x][0])
    for x in charged:
        charged[x].sort(key=lambda e: e.key)
    return charged


def last_level_vcft(engine: Engine, i: int, hooks: LevelHooks, symmetry: str | None = None):
    """Two-way voting at the last level; mutates ``engine`` (kept set and report)."""
    g, cfg = engine.g, engine.cfg
    symmetry = symmetry or cfg.symmetry
    lc = engine.levels[i]
    lhat = lc.lhat
    D, f = lc.D, lc.f
    charged = charge_edges(engine, i, symmetry, hooks)
    support = set(engine.kept) if cfg.audit else None
    draws = cfg.sample_const * max(1, math.ceil(math.log(max(g.n, 2))))
    counts = {}
    types = Counter()
    per_vertex_types = {}
    phis = {}
    step_floor = Fraction(1, 8 * D)
    new_keeps = set()
    for v in sorted(charged):
        view = hooks.view_for(v, i, engine)
        cv = view.vcolor(v)
        hat = TouristicPark(v, None, lhat)
        type2_paths = []
        rng = vote_rng(cfg.seed, i, v)
        dec = Counter()
        vtypes = Counter()
        kept_here = set()
        phi = Fraction(0)
        for e in charged[v]:
            u = e.other(v)
            att = engine.undecided[e.id][u]
            if cfg.audit:
                heaviest = max((p.max_weight for p in hat), default=0.0)
                check(heaviest <= e.w, "store holds a path heavier than the edge", e.id)
            vote = decide_edge(hat, v, e, att, lc, engine.rule, view, cfg.voting, rng, draws,
                               allow_postpone=False)
            d = vote.dcsn
            if d == KEEP:
                cu = view.vcolor(u)
                kind = 1 if att.witness == (cu,) else 2
                keepers = vote.votes[KEEP]
                extended = [prepend(e, v, P, cv) for P in keepers]
                inserted = [p for p in extended if hat.insert(p, clamp=True) == "inserted"]
                clamped = len(extended) - len(inserted)
                engine.result.clamps += clamped
                kept_here.add(e.id)
                new_keeps.add(e.id)
                vtypes[kind] += 1
                types[kind] += 1
                gain = sum((lhat.weight(len(p.colors) - len(colorset((cv, view.vcolor(p.end)))))
                            for p in inserted), Fraction(0))
                phi += gain
                regular = _mass(lc, keepers, att.witness) >= EIGHTH and not clamped
                if kind == 2:
                    type2_paths.extend(inserted)
                if regular:
                    if kind == 1:
                        check(gain >= step_floor, "type-1 keep raised the potential too little",
                              e.id, gain)
                    else:
                        dx = sum((lhat.weight(len(p.colors) - 2) for p in inserted
                                  if view.vcolor(p.end) != cv), Fraction(0))
                        dy = sum((lhat.weight(len(p.colors) - 1) for p in inserted
                                  if view.vcolor(p.end) == cv), Fraction(0))
                        check(dx + 2 * f * dy >= step_floor,
                              "type-2 keep raised neither potential enough", e.id, dx, dy)
            elif d == SAFE and cfg.audit:
                replay_safe(hat, v, e, att, vote.votes[SAFE], lc, engine.rule, view,
                            support | kept_here, g.edge_by_id.__getitem__)
            dec[d] += 1
            if cfg.trace:
                engine.result.trace.append((i, v, e.id, d, ""))
        if cfg.audit:
            hat.audit()
        counts[v] = dec
        per_vertex_types[v] = dict(vtypes)
        phi_final, phi_x, phi_y = potentials(hat, type2_paths, cv, lhat, view)
        if cfg.audit and not hat.clamped:
            check(phi_final == phi, "potential bookkeeping drifted", v)
        phis[v] = (phi_final, phi_x, phi_y)
    engine.kept |= new_keeps
    engine.result.level_counts.append(counts)
    n_last = sum(1 for x in range(g.n) if engine.center_levels[x] >= i)
    engine.result.extra.update({
        "type1": types[1], "type2": types[2],
        "last_level_centers": n_last,
        "phi_max": float(max((p[0] for p in phis.values()), default=0)),
        "phi_x_max": float(max((p[1] for p in phis.values()), default=0)),
        "phi_y_max": float(max((p[2] for p in phis.values()), default=0)),
        "type_counts": {v: t for v, t in sorted(per_vertex_types.items()) if t},
        "symmetry": symmetry,
    })
    engine.undecided = {}


def potentials(hat: TouristicPark, type2_paths, cv, lhat, view):
    """(Phi, Phi_X, Phi_Y) of one vertex, recomputed from its final store."""
    phi = Fraction(0)
    for s, pk in hat.locals.items():
        phi += pk.score(colorset((cv, view.vcolor(s))))
    px = py = Fraction(0)
    for p in type2_paths:
        cs = view.vcolor(p.end)
        if cs != cv:
            px += lhat.weight(len(p.colors) - 2)
        else:
            py += lhat.weight(len(p.colors) - 1)
    return phi, px, py


def build_vcft_spanner(g: ColoredGraph, f: int, k: int, cfg: SpannerConfig | None = None,
                       hooks: LevelHooks | None = None) -> SpannerResult:
    """f-fault-tolerant (2k-1)-spanner against vertex-color faults."""
    if g.mode != VCFT:
        raise ValueError("build_vcft_spanner needs a vertex-colored graph")
    cfg = cfg or SpannerConfig()
    f = normalize_f(f)
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return SpannerResult("vcft", g.n, g.m, k, f, tuple(sorted(e.id for e in g.edges)))
    engine = Engine(g, f, k, cfg, vertex=True, algo="vcft")
    engine.last_level = last_level_vcft
    return engine.run(hooks)
