import random
from collections import Counter

import numpy as np
import pytest

from cftspan import SpannerConfig, build_ecft_spanner, verify_cft
from cftspan.ecft import (KEEP, PSTPN, SAFE, Attachment, ColorRule, GlobalView, decide_edge,
                          parse_spanner)
from cftspan.errors import LemmaViolation
from cftspan.graph import Edge, from_edge_list, generate_random
from cftspan.park import PathRec, TouristicPark
from cftspan.params import level_config

from oracles import stretch_violations


def random_tree(n, seed, colors=3):
    rng = random.Random(seed)
    return from_edge_list("ecft", n, [(v, rng.randrange(v), rng.uniform(1, 5), rng.randrange(colors))
                                      for v in range(1, n)], color_count=colors)


def dense_multigraph(seed, n=12, m=120, colors=2):
    return generate_random("ecft", n, m, color_count=colors, coloring="monochromatic-biased",
                           seed=seed)


@pytest.mark.parametrize("seed", range(4))
def test_tree_is_kept_whole(seed):
    g = random_tree(15, seed)
    res = build_ecft_spanner(g, 1, 2, SpannerConfig(seed=seed, audit=True))
    assert res.kept == tuple(range(g.m))


@pytest.mark.parametrize("mode", ["practical", "paper"])
def test_k6_distinct_colors(k6_distinct, mode):
    res = build_ecft_spanner(k6_distinct, 1, 2, SpannerConfig(mode=mode, audit=True))
    rep = verify_cft(k6_distinct, res.kept, 1, 2)
    assert rep.passed and rep.violations == 0


@pytest.mark.parametrize("seed", range(6))
def test_dense_multigraphs_reach_later_levels(seed):
    g = dense_multigraph(seed)
    res = build_ecft_spanner(g, 1, 3, SpannerConfig(seed=seed, audit=True))
    assert verify_cft(g, res.kept, 1, 3).passed
    totals = res.level_totals()
    assert len(totals) == 3
    assert res.sampler["calls"] > 0
    assert sum(totals[0].values()) == 2 * g.m
    assert res.size < g.m


def test_some_instance_decides_edges_past_level_zero():
    late = 0
    for seed in range(12):
        res = build_ecft_spanner(dense_multigraph(seed), 1, 3, SpannerConfig(seed=seed))
        late += sum(sum(t.values()) for t in res.level_totals()[1:])
    assert late > 0


def test_oracle_agrees_with_verifier_on_f0_faults():
    g = dense_multigraph(3)
    res = build_ecft_spanner(g, 1, 2, SpannerConfig(seed=3))
    assert stretch_violations(g, res.kept, 3) == []
    for c in range(g.color_count):
        assert stretch_violations(g, res.kept, 3, lambda e, c=c: e.color == c) == []


def test_determinism():
    g = dense_multigraph(8)
    cfg = SpannerConfig(seed=41, audit=True)
    a, b = build_ecft_spanner(g, 2, 3, cfg), build_ecft_spanner(g, 2, 3, cfg)
    assert a.kept == b.kept and a.report() == b.report()


def test_sampled_voting_verifies():
    for seed in range(4):
        g = dense_multigraph(seed)
        res = build_ecft_spanner(g, 1, 2, SpannerConfig(seed=seed, voting="sampled", audit=True))
        assert verify_cft(g, res.kept, 1, 2).passed


def test_paper_mode_keeps_everything_at_desk_scale():
    g = dense_multigraph(1, n=10, m=40)
    res = build_ecft_spanner(g, 2, 2, SpannerConfig(mode="paper", audit=True))
    assert res.clamps == 0
    assert res.size == g.m


def test_k1_and_f0():
    g = dense_multigraph(2, n=8, m=20)
    assert build_ecft_spanner(g, 1, 1).kept == tuple(range(g.m))
    with pytest.warns(UserWarning):
        res = build_ecft_spanner(g, 0, 2)
    assert res.f == 1


def test_rejects_vertex_colored_input():
    g = generate_random("vcft", 6, 10, color_count=2, seed=0)
    with pytest.raises(ValueError):
        build_ecft_spanner(g, 1, 2)


def test_spanner_text_roundtrip(k6_distinct):
    res = build_ecft_spanner(k6_distinct, 1, 2)
    assert parse_spanner(res.spanner_text()) == (2, 1, list(res.kept))
    assert res.spanner_text().startswith("spanner 2 1 3\n")


# -------------------------------------------------------------- voting


def voting_fixture(n_attached=3, store=0):
    """Edge e = (v=0, u=1) of color 0; u's attachment holds 1-hop paths of
    color 0 to the center 2, v's store holds ``store`` such paths."""
    cfg = SpannerConfig()
    lc = level_config(64, 2, 1, 1, cfg)
    g = from_edge_list("ecft", 3, [(0, 1, 5.0, 0), (1, 2, 1.0, 0), (0, 2, 1.0, 0)])
    view = GlobalView(g, [0, 1, 1])
    att_park = TouristicPark(1, lc.gsc, lc.lsc)
    for j in range(n_attached):
        att_park.insert(PathRec((100 + j,), (1, 2), (0,)), clamp=False)
    att = Attachment(att_park, (0,))
    hat = TouristicPark(0, lc.ghat, lc.lhat)
    for j in range(store):
        hat.insert(PathRec((200 + j,), (0, 2), (0,)), clamp=False)
    return hat, Edge(0, 0, 1, 5.0, 0), att, lc, ColorRule(False), view


def test_all_keep_votes():
    hat, e, att, lc, rule, view = voting_fixture(store=0)
    vote = decide_edge(hat, 0, e, att, lc, rule, view)
    assert vote.dcsn == KEEP and len(vote.votes[KEEP]) == 3


def test_full_local_store_gives_safe():
    hat, e, att, lc, rule, view = voting_fixture(store=5)
    assert hat.local(2).is_full((0,))
    vote = decide_edge(hat, 0, e, att, lc, rule, view)
    assert vote.dcsn == SAFE and len(vote.votes[SAFE]) == 3


def test_underfull_attachment_is_an_error():
    hat, e, att, lc, rule, view = voting_fixture(n_attached=0)
    with pytest.raises(LemmaViolation):
        decide_edge(hat, 0, e, att, lc, rule, view)


def random_voting_state(rng):
    cfg = SpannerConfig()
    # small n pushes rho to 1, so the store can become globally full
    lc = level_config(4, 2, 1, 1, cfg)
    g = from_edge_list("ecft", 12, [(0, 1, 1.0, 0)], color_count=4)
    view = GlobalView(g, [1] * 12)
    att_park = TouristicPark(1, lc.gsc, lc.lsc)
    for j in range(rng.randint(3, 30)):
        cs = tuple(sorted({0} | set(rng.sample(range(1, 4), rng.randint(0, 2)))))
        att_park.insert(PathRec((100 + j,), (1, rng.randint(2, 11)), cs), clamp=True)
    hat = TouristicPark(0, lc.ghat, lc.lhat)
    for j in range(rng.randint(0, 90)):
        cs = tuple(sorted(set(rng.sample(range(4), rng.randint(0, 3)))))
        hat.insert(PathRec((300 + j,), (0, rng.randint(2, 11)), cs), clamp=True)
    return hat, Edge(0, 0, 1, 1.0, 0), Attachment(att_park, (0,)), lc, ColorRule(False), view


def test_sampled_decisions_match_exact():
    rng = random.Random(2)
    agree = trials = 0
    seen = Counter()
    while trials < 400:
        hat, e, att, lc, rule, view = random_voting_state(rng)
        if not att.park.global_.is_full((0,)):
            continue
        trials += 1
        exact = decide_edge(hat, 0, e, att, lc, rule, view).dcsn
        sampled = decide_edge(hat, 0, e, att, lc, rule, view, "sampled",
                              np.random.default_rng(trials), draws=48 * 5).dcsn
        agree += exact == sampled
        seen[exact] += 1
    assert min(seen[KEEP], seen[SAFE], seen[PSTPN]) >= 20, seen
    assert agree / trials >= 0.99, agree / trials
