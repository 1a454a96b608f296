"""Acceptance criteria 1-10, one test each.

Every test prints a single ``criterion NN: PASS/FAIL`` line (also gathered in
the terminal summary) before asserting, so a failing criterion still reports
what it measured.
"""

from __future__ import annotations

import functools
import random
from collections import Counter
from contextlib import contextmanager
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from cftspan import SpannerConfig, build_ecft_spanner, build_vcft_spanner, verify_cft, verify_vft
from cftspan.baselines import baswana_sen, greedy_cft, parter_vft
from cftspan.cli import main as cli_main
from cftspan.distsim import VARIANTS, simulate_congest, simulate_local
from cftspan.ftgame import bob_forcing, check_certificate, play
from cftspan.graph import generate_random
from cftspan.park import Park, PathRec, TouristicPark
from cftspan.params import level_config
from cftspan.sampler import FALLBACK, FULL_PARK, park_sample
from cftspan.warmup import warmup_3spanner

import acceptance_log
import oracles
import park_props
import score_props
from corpus import corpus, warmup_corpus
from test_sampler import random_instance

pytestmark = pytest.mark.slow

CORPUS = corpus()
TRIALS = 10_000


@contextmanager
def criterion(number):
    """Records FAIL with the error text if the body raises before recording."""
    try:
        yield
    except Exception as exc:
        if number not in acceptance_log.LINES:
            acceptance_log.record(number, False, f"{type(exc).__name__}: {exc}")
        raise


class AuditTally:
    """Counts park audits and the largest link score they saw."""

    def __init__(self):
        self.calls = Counter()
        self.max_score = {"global": Fraction(0), "local": Fraction(0)}

    @contextmanager
    def watching(self):
        orig = Park.audit
        tally = self

        def counted(pk):
            out = orig(pk)
            if pk.enforce:
                kind = "local" if pk.params.alpha == 2 else "global"
                tally.calls[kind] += 1
                tally.max_score[kind] = max(tally.max_score[kind], pk.max_link_score())
            return out

        Park.audit = counted
        try:
            yield self
        finally:
            Park.audit = orig


TALLY = AuditTally()


@functools.lru_cache(maxsize=None)
def ecft_runs():
    """Audited builds of the whole corpus in both parameter modes."""
    rows = []
    with TALLY.watching():
        for inst in CORPUS:
            g = inst.graph("ecft")
            for mode in ("practical", "paper"):
                res = build_ecft_spanner(g, inst.f, inst.k,
                                         SpannerConfig(mode=mode, seed=inst.seed, audit=True))
                rows.append((inst, mode, g, res))
    return rows


@functools.lru_cache(maxsize=None)
def vcft_runs():
    rows = []
    with TALLY.watching():
        for inst in CORPUS:
            g = inst.graph("vcft")
            mode = "paper" if inst.index % 4 == 3 else "practical"
            for symmetry in ("sequential", "distributed"):
                cfg = SpannerConfig(mode=mode, seed=inst.seed, audit=True, symmetry=symmetry)
                rows.append((inst, symmetry, g, build_vcft_spanner(g, inst.f, inst.k, cfg)))
    return rows


def sampler_totals(rows):
    tot = Counter()
    for row in rows:
        tot.update(row[-1].sampler)
    return tot


# ----------------------------------------------------------------- 1

def test_criterion_01_ecft_correctness():
    with criterion(1):
        bad = []
        checks = 0
        for inst, mode, g, res in ecft_runs():
            rep = verify_cft(g, res.kept, inst.f, inst.k)
            checks += rep.checks
            if rep.violations:
                bad.append((inst.index, mode, rep.violations))
        late = sum(sum(sum(t.values()) for t in res.level_totals()[1:])
                   for _, _, _, res in ecft_runs())
        acceptance_log.record(1, not bad, f"{len(ecft_runs())} builds, {checks} exact checks, "
                                          f"{len(bad)} with violations, {late} decisions past level 0")
    assert not bad, bad


# ----------------------------------------------------------------- 2

def test_criterion_02_vcft_correctness():
    with criterion(2):
        bad = []
        types = Counter()
        for inst, symmetry, g, res in vcft_runs():
            rep = verify_cft(g, res.kept, inst.f, inst.k)
            types.update({"type1": res.extra["type1"], "type2": res.extra["type2"]})
            if rep.violations:
                bad.append((inst.index, symmetry, rep.violations))
        acceptance_log.record(2, not bad, f"{len(vcft_runs())} builds over both symmetry rules, "
                                          f"{len(bad)} with violations, last-level keeps {dict(types)}")
    assert not bad, bad


# ----------------------------------------------------------------- 3

def test_criterion_03_warmup():
    with criterion(3):
        bad = []
        replays = safes = 0
        for inst in warmup_corpus():
            g = inst.graph()
            res = warmup_3spanner(g, inst.f, seed=inst.seed, audit=True)
            replays += res.extra["replayed_fault_sets"]
            safes += res.level_totals()[1].get("safe", 0)
            if not verify_cft(g, res.kept, inst.f, 2).passed:
                bad.append(inst.index)
        ok = not bad and replays > 0
        acceptance_log.record(3, ok, f"50 instances, {len(bad)} failing, {safes} level-1 safe "
                                     f"edges, {replays} fault sets replayed")
    assert not bad, bad
    assert replays > 0


# ----------------------------------------------------------------- 4

def test_criterion_04_park_invariants():
    with criterion(4):
        ecft_runs()
        vcft_runs()
        rng = random.Random(4)
        done = 0
        while done < TRIALS:
            drawn = park_props.draw_survival(rng)
            if drawn is None:
                continue
            park_props.check_survival(*drawn)
            done += 1
        calls, top = TALLY.calls, TALLY.max_score
        ok = calls["global"] > 0 and calls["local"] > 0 and max(top.values()) <= 1
        acceptance_log.record(4, ok, f"{calls['global']} global / {calls['local']} local park "
                                     f"audits, max link score {top['global']} / {top['local']}, "
                                     f"{done} surviving-path trials")
    assert ok


# ----------------------------------------------------------------- 5

def test_criterion_05_score_toolbox():
    with criterion(5):
        counts = {}
        for j, (name, (draw, check)) in enumerate(score_props.SUITES.items()):
            rng = random.Random(500 + j)
            for _ in range(TRIALS):
                check(*draw(rng))
            counts[name] = TRIALS
        acceptance_log.record(5, True, ", ".join(f"{k}: {v}" for k, v in counts.items()))


# ----------------------------------------------------------------- 6

def paper_star(cur, rng):
    """Random star of stored paths under the paper-mode hat scores."""
    tp = TouristicPark(0, cur.ghat, cur.lhat)
    I = (0,)
    j = 0
    for s in range(1, rng.randint(2, 3 * cur.sample_size)):
        for _ in range(rng.randint(1, 4)):
            cs = tuple(sorted({0} | set(rng.sample(range(1, 5), rng.randint(0, 2)))))
            tp.insert(PathRec((j,), (0, s), cs), clamp=True)
            j += 1
    return tp, I


def test_criterion_06_sampler():
    with criterion(6):
        runs = ecft_runs() + vcft_runs()
        tot = sampler_totals(runs)
        paper_calls = sum(res.sampler.get("calls", 0) for _, mode, _, res in ecft_runs()
                          if mode == "paper")
        paper_calls += sum(res.sampler.get("calls", 0) for inst, _, _, res in vcft_runs()
                           if inst.index % 4 == 3)

        # direct audited calls with an independent recount of every full output
        rng = random.Random(6)
        direct = Counter()
        for _ in range(2000):
            cur, nxt, tp, I, centers = random_instance(rng)
            out = park_sample(tp, I, centers, cur, nxt, audit=True)
            direct[out.result] += 1
            if out.result == FULL_PARK:
                cs = [p.colors for p in out.park]
                assert oracles.total_score(nxt.alpha, nxt.beta, nxt.f, cs, I) > Fraction(1, 2)

        # paper-mode accounting on direct inputs large enough to fill batches
        clean = 0
        heaviest = Fraction(0)
        cfg = SpannerConfig(mode="paper")
        cur, nxt = level_config(30, 2, 1, 0, cfg), level_config(30, 2, 1, 1, cfg)
        for _ in range(300):
            tp, I = paper_star(cur, rng)
            ends = {p.end for p in tp.paths}
            centers = {s for s in ends if rng.random() < 0.3}
            out = park_sample(tp, I, centers, cur, nxt, audit=True, accounting=True)
            if out.result == FALLBACK and out.error_events == 0:
                clean += 1
            mass = oracles.total_score(cur.ghat.alpha, cur.ghat.beta, cur.f,
                                       [p.colors for p in tp.global_.link(I)], I)
            heaviest = max(heaviest, mass)
        ok = (tot["calls"] > 0 and direct[FULL_PARK] > 0 and clean > 0
              and heaviest <= Fraction(1, 8))
        acceptance_log.record(
            6, ok, f"audited runs: {tot['calls']} sampler calls ({tot['full']} full, "
                   f"{tot['fallback']} fallback, {tot['iterations']} audited iterations); "
                   f"paper-mode runs invoked the sampler {paper_calls} times; direct: "
                   f"{dict(direct)}; paper accounting: {clean} clean fallbacks, input hat "
                   f"mass at most {float(heaviest):.2e}")
    assert ok


# ----------------------------------------------------------------- 7

def test_criterion_07_ft_game():
    with criterion(7):
        wrong = []
        pairs = [(f, k) for f in range(1, 8) for k in range(1, 8) if f + k <= 8]
        for f, k in pairs:
            sets = list(bob_forcing(f, k))
            opt = play(f, k, "optimal", sets, universe=range(f + k))
            if len(opt.kept) != comb(f + k, k) or not check_certificate(
                    range(f + k), sets, opt.kept, f):
                wrong.append(("optimal", f, k, len(opt.kept)))
            pk = play(f, k, "park", sets, universe=range(f + k))
            if len(pk.kept) > 2 * (2 * f) ** k or not check_certificate(
                    range(f + k), sets, pk.kept, f):
                wrong.append(("park", f, k, len(pk.kept)))
        rng = random.Random(7)
        streams = 0
        for _ in range(300):
            f, k = rng.randint(1, 3), rng.randint(1, 3)
            universe = rng.randint(k, 7)
            sets = [tuple(sorted(rng.sample(range(universe), rng.randint(1, k))))
                    for _ in range(rng.randint(1, 30))]
            for alice in ("optimal", "park"):
                st = play(f, k, alice, sets, universe=range(universe))
                limit = comb(f + k, k) if alice == "optimal" else 2 * (2 * f) ** k
                if len(st.kept) > limit or not check_certificate(range(universe), sets,
                                                                 st.kept, f):
                    wrong.append((alice, f, k, sets))
            streams += 1
        acceptance_log.record(7, not wrong, f"{len(pairs)} forcing games with f+k<=8 and "
                                            f"{streams} random streams, {len(wrong)} failures")
    assert not wrong, wrong[:5]


# ----------------------------------------------------------------- 8

def all_pairs_stretch_ok(g, kept, t):
    kept = set(kept)
    full = oracles.floyd_warshall(g.n, [(e.u, e.v, e.w) for e in g.edges])
    sub = oracles.floyd_warshall(g.n, [(e.u, e.v, e.w) for e in g.edges if e.id in kept])
    fin = np.isfinite(full)
    return bool(np.all(sub[fin] <= t * full[fin] * (1 + 1e-12)))


def test_criterion_08_baselines():
    with criterion(8):
        bs_bad = []
        for j in range(50):
            k = 2 + j % 2
            g = generate_random("ecft", 30, 200 + 4 * j, color_count=1, seed=800 + j, simple=True)
            res = baswana_sen(g, k, seed=j)
            if not all_pairs_stretch_ok(g, res.kept, 2 * k - 1):
                bs_bad.append(j)
        pv_bad = []
        for j in range(30):
            f = 1 + j % 2
            n = 12 + j % 9
            g = generate_random("ecft", n, min(80, n * (n - 1) // 2), color_count=1,
                                seed=900 + j, simple=True)
            res = parter_vft(g, f, 2, seed=j, voting="sampled" if j % 3 == 2 else "exact",
                             audit=True)
            if not verify_vft(g, res.kept, f, 2).passed:
                pv_bad.append(j)
        gr_bad, smaller, total = [], 0, 0
        for inst, mode, g, res in ecft_runs():
            if mode != "practical":
                continue
            gr = greedy_cft(g, inst.f, inst.k)
            if not verify_cft(g, gr.kept, inst.f, inst.k).passed:
                gr_bad.append(inst.index)
            total += 1
            smaller += gr.size <= res.size
        share = smaller / total
        ok = not bs_bad and not pv_bad and not gr_bad and share >= 0.95
        acceptance_log.record(8, ok, f"Baswana-Sen 50 all-pairs ({len(bs_bad)} bad), Parter "
                                     f"30 exact vertex-fault checks ({len(pv_bad)} bad), greedy "
                                     f"{total} verified ({len(gr_bad)} bad), greedy <= main "
                                     f"in {share:.1%}")
    assert ok


# ----------------------------------------------------------------- 9

def variant_graph(inst, variant):
    if variant == "vcft":
        return inst.graph("vcft")
    if variant == "parter_vft":
        n = inst.n
        return generate_random("ecft", n, min(inst.m, n * (n - 1) // 2), color_count=1,
                               seed=inst.seed, simple=True)
    return inst.graph("ecft")


def test_criterion_09_distributed():
    with criterion(9):
        local_bad, congest_bad = [], []
        runs = capacity = 0
        max_rounds_ratio = 0.0
        for inst in CORPUS[:50]:
            for variant in VARIANTS:
                g = variant_graph(inst, variant)
                res, log = simulate_local(g, inst.f, inst.k, variant, seed=inst.seed)
                runs += 1
                max_rounds_ratio = max(max_rounds_ratio, log.rounds / inst.k)
                if not log.identical or log.rounds > 3 * inst.k:
                    local_bad.append((inst.index, variant))
                budget = 1 + inst.index % 7
                _, clog = simulate_congest(g, inst.f, inst.k, variant, word_budget=budget,
                                           seed=inst.seed)
                capacity += clog.capacity_checks
                if not clog.identical or any(w > budget for w in clog.per_round_max_words):
                    congest_bad.append((inst.index, variant))
        ok = not local_bad and not congest_bad and capacity > 0
        acceptance_log.record(9, ok, f"{runs} LOCAL runs ({len(local_bad)} bad, at most "
                                     f"{max_rounds_ratio:.2f}k rounds), {runs} CONGEST runs "
                                     f"({len(congest_bad)} bad), {capacity} attachment "
                                     f"capacity checks")
    assert ok, (local_bad, congest_bad)


# ---------------------------------------------------------------- 10

SPAN_ALGOS = ("ecft", "vcft", "baswana-sen", "greedy", "ecft")


def cli_outputs(inst, tmp, capsys):
    """Runs a fixed command sequence for one instance; returns every output as bytes."""
    def call(*argv):
        code = cli_main([str(a) for a in argv])
        out, _ = capsys.readouterr()
        return code, out.encode()

    mode = "vcft" if inst.index % 5 == 1 else "ecft"
    gpath, spath, rpath = tmp / "g.txt", tmp / "s.txt", tmp / "r.json"
    outs = [call("gen", "--mode", mode, "--n", inst.n, "--m", inst.m, "--colors", inst.colors,
                 "--coloring", inst.coloring if mode == "ecft" else "uniform",
                 "--seed", inst.seed, "--out", gpath)]
    outs.append(gpath.read_bytes())
    algo = SPAN_ALGOS[inst.index % 5]
    voting = "sampled" if inst.index % 2 else "exact"
    outs.append(call("span", gpath, "--algo", algo, "--k", inst.k, "--f", inst.f,
                     "--voting", voting, "--seed", inst.seed, "--out", spath, "--report", rpath))
    outs += [spath.read_bytes(), rpath.read_bytes()]
    outs.append(call("verify", gpath, spath, "--sample", 10, "--seed", inst.seed))
    if inst.index % 10 == 0:
        variant = "vcft" if mode == "vcft" else "ecft"
        outs.append(call("sim", gpath, "--variant", variant, "--model", "congest",
                         "--word-budget", 4, "--k", inst.k, "--f", inst.f, "--seed", inst.seed))
    if inst.index % 25 == 0:
        outs.append(call("game", "--f", inst.f, "--k", inst.k, "--alice", "park"))
    return outs


def test_criterion_10_determinism(tmp_path, capsys):
    with criterion(10):
        differing = []
        compared = 0
        for inst in CORPUS:
            a = cli_outputs(inst, tmp_path, capsys)
            b = cli_outputs(inst, tmp_path, capsys)
            compared += len(a)
            if a != b:
                differing.append(inst.index)
        ok = not differing
        with capsys.disabled():
            acceptance_log.record(10, ok, f"{len(CORPUS)} instances, {compared} outputs "
                                          f"compared byte for byte, {len(differing)} differ")
    assert ok, differing
