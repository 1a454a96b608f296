"""Stretch verification by fault enumeration.

For every fault set F (all of them up to size f, or a random sample) and every
input edge e = {u, v} that F does not damage, the check is

    dist_{H-F}(u, v) <= (2k-1) w(e).

Checking edges is enough: a shortest path in G-F is a sequence of surviving
edges, and the bound composes along it. Distances come from scipy's
compiled Dijkstra, independent of the library's own shortest-path code.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .errors import BudgetExceeded
from .graph import ColoredGraph

EPS = 2.0 ** -40
DEFAULT_BUDGET = 200_000


@dataclass
class VerifyReport:
    passed: bool
    kind: str
    fault_sets: int = 0
    checks: int = 0
    violations: int = 0
    worst: tuple | None = None
    max_stretch: float = 0.0
    histogram: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {"pass": self.passed, "kind": self.kind, "fault_sets": self.fault_sets,
                "checks": self.checks, "violations": self.violations,
                "worst": list(self.worst) if self.worst else None,
                "max_stretch": self.max_stretch,
                "histogram": {str(k): v for k, v in sorted(self.histogram.items())}}


def _dist_matrix(n: int, edges, blocked=frozenset(), sources=None):
    mat = np.full((n, n), np.inf)
    for e in edges:
        if e.u in blocked or e.v in blocked:
            continue
        if e.w < mat[e.u, e.v]:
            mat[e.u, e.v] = mat[e.v, e.u] = e.w
    if sources is None:
        return dijkstra(mat, directed=False)
    src = sorted(set(sources))
    if not src:
        return {}, np.zeros((0, n))
    rows = dijkstra(mat, directed=False, indices=src)
    return {s: i for i, s in enumerate(src)}, rows


def _enumerate(pool, f, mode, trials, seed, budget):
    pool = list(pool)
    if mode == "exact":
        total = sum(comb(len(pool), j) for j in range(min(f, len(pool)) + 1))
        if total > budget:
            raise BudgetExceeded(f"{total} fault sets exceed the budget of {budget}")
        for j in range(min(f, len(pool)) + 1):
            yield from combinations(pool, j)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        top = min(f, len(pool))
        for _ in range(trials):
            r = int(rng.integers(top + 1))
            yield tuple(sorted(int(x) for x in rng.choice(pool, size=r, replace=False)))
    else:
        raise ValueError(f"unknown verification mode {mode!r}")


def _damage_rule(g, kind):
    if kind == "vft":
        return (lambda F, e: e.u in F or e.v in F), frozenset
    if kind == "cft":
        return (lambda F, e: g.damages(F, e)), (lambda F: frozenset())
    return (lambda F, e: False), (lambda F: frozenset())


def _check(g, H_edges, f, k, faults, kind, all_pairs=False):
    rep = VerifyReport(True, kind)
    damaged, blocked_of = _damage_rule(g, kind)
    t = 2 * k - 1
    for F in faults:
        rep.fault_sets += 1
        bucket = rep.histogram.setdefault(len(F), [0, 0])
        bucket[0] += 1
        blocked = blocked_of(F)
        alive_g = [e for e in g.edges if not damaged(F, e)]
        alive_h = [e for e in H_edges if not damaged(F, e)]
        if all_pairs:
            dg = _dist_matrix(g.n, alive_g, blocked)
            dh = _dist_matrix(g.n, alive_h, blocked)
            pairs = [(x, y) for x in range(g.n) for y in range(x + 1, g.n)
                     if x not in blocked and y not in blocked and np.isfinite(dg[x, y])]
            for x, y in pairs:
                rep.checks += 1
                d, ref = float(dh[x, y]), float(dg[x, y])
                _record(rep, bucket, (x, y), F, d, ref, t)
            continue
        index, rows = _dist_matrix(g.n, alive_h, blocked, [e.u for e in alive_g])
        for e in alive_g:
            rep.checks += 1
            d = float(rows[index[e.u], e.v])
            _record(rep, bucket, e.id, F, d, e.w, t)
    rep.passed = rep.violations == 0
    return rep


def merge_reports(parts) -> VerifyReport:
    """Combine reports over disjoint batches of fault sets."""
    parts = list(parts)
    out = VerifyReport(True, parts[0].kind if parts else "")
    for r in parts:
        out.fault_sets += r.fault_sets
        out.checks += r.checks
        out.violations += r.violations
        out.max_stretch = max(out.max_stretch, r.max_stretch)
        out.worst = _worse(out.worst, r.worst)
        for size, (cnt, bad) in r.histogram.items():
            slot = out.histogram.setdefault(size, [0, 0])
            slot[0] += cnt
            slot[1] += bad
    out.passed = out.violations == 0
    return out


def _worker(args):
    return _check(*args)


def _run(g, Hs, f, k, faults, kind, all_pairs, jobs):
    if jobs <= 1:
        return _check(g, Hs, f, k, faults, kind, all_pairs)
    faults = list(faults)
    chunks = [faults[j::jobs] for j in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_worker, [(g, Hs, f, k, c, kind, all_pairs) for c in chunks]))
    return merge_reports(parts)


def _worse(a, b):
    """The more severe of two violations; ties go to the smaller fault set,
    then the smaller witness, so the choice does not depend on visiting order."""
    if a is None or b is None:
        return a or b
    ra, rb = a[2] / a[3], b[2] / b[3]
    if ra != rb:
        return a if ra > rb else b
    return min(a, b, key=lambda w: (len(w[1]), w[1], w[0]))


def _record(rep, bucket, what, F, d, ref, t):
    bound = t * ref
    stretch = d / ref if ref > 0 else 1.0
    if d > bound + EPS * ref:
        rep.violations += 1
        bucket[1] += 1
        rep.worst = _worse(rep.worst, (what, tuple(F), d, bound))
    rep.max_stretch = max(rep.max_stretch, stretch)


def _spanner_edges(g: ColoredGraph, H: Iterable[int]):
    ids = set(H)
    unknown = ids - set(g.edge_by_id)
    if unknown:
        raise ValueError(f"spanner mentions unknown edges {sorted(unknown)[:5]}")
    return [g.edge_by_id[i] for i in sorted(ids)]


def verify_cft(g: ColoredGraph, H: Iterable[int], f: int, k: int, mode: str = "exact",
               trials: int = 200, seed: int = 0, budget: int = DEFAULT_BUDGET,
               all_pairs: bool = False, jobs: int = 1) -> VerifyReport:
    """Color faults: F is a set of at most f colors."""
    Hs = _spanner_edges(g, H)
    faults = _enumerate(range(g.color_count), f, mode, trials, seed, budget)
    return _run(g, Hs, f, k, faults, "cft", all_pairs, jobs)


def verify_vft(g: ColoredGraph, H: Iterable[int], f: int, k: int, mode: str = "exact",
               trials: int = 200, seed: int = 0, budget: int = DEFAULT_BUDGET,
               all_pairs: bool = False, jobs: int = 1) -> VerifyReport:
    """Vertex faults: F is a set of at most f vertices, never an endpoint of the
    checked edge (edges touching F are skipped)."""
    Hs = _spanner_edges(g, H)
    faults = _enumerate(range(g.n), f, mode, trials, seed, budget)
    return _run(g, Hs, f, k, faults, "vft", all_pairs, jobs)


def verify_plain(g: ColoredGraph, H: Iterable[int], k: int, all_pairs: bool = False) -> VerifyReport:
    Hs = _spanner_edges(g, H)
    return _check(g, Hs, 0, k, [()], "plain", all_pairs)


def spanner_stats(g: ColoredGraph, H: Iterable[int], k: int | None = None,
                  f: int | None = None) -> dict:
    Hs = _spanner_edges(g, H)
    out = {"n": g.n, "m": g.m, "size": len(Hs),
           "fraction_kept": len(Hs) / g.m if g.m else 1.0,
           "weight": float(sum(e.w for e in Hs)), "input_weight": float(sum(e.w for e in g.edges))}
    if k:
        ref = g.n ** (1 + 1 / k)
        out["n_pow"] = ref
        out["size_over_n_pow"] = len(Hs) / ref
        if f:
            out["size_over_f_n_pow"] = len(Hs) / (f * ref)
    return out
