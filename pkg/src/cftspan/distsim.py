"""Synchronous message-passing replay of the spanner constructions.

Each level costs one round in which every endpoint of an undecided edge
ships its attachment to the other endpoint. A vertex only sends an
attachment for an edge it postponed, so receiving one also tells the
receiver that the sender postponed; no separate decision round is needed.
The vertex-color construction adds one round at its last level to trade
the sizes used for charging edges.

Vertices read global state only through guarded views. A read of a vertex
outside {v}, N(v) and the vertices of paths v has received so far raises
:class:`SimulationFault`.

Under CONGEST every directed edge carries at most ``word_budget`` words per
round, a path record costing hop length + number of colors + 2 words, so a
level's shipment is chunked over ceil(total words / budget) rounds.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

from .baselines import baswana_sen, parter_vft
from .ecft import LevelHooks, build_ecft_spanner
from .errors import SimulationFault, check
from .graph import ColoredGraph
from .params import SpannerConfig
from .park import PathRec
from .vcft import build_vcft_spanner

VARIANTS = ("ecft", "vcft", "parter_vft", "baswana_sen")


@dataclass
class RoundLog:
    model: str
    word_budget: float
    rounds: int = 0
    per_round_max_words: list = field(default_factory=list)
    per_level: list = field(default_factory=list)
    max_attachment_paths: int = 0
    capacity_checks: int = 0
    spanner_hash: str = ""
    sequential_hash: str = ""

    @property
    def identical(self) -> bool:
        return self.spanner_hash == self.sequential_hash

    def summary(self) -> dict:
        return {"model": self.model, "word_budget": self.word_budget, "rounds": self.rounds,
                "per_level": self.per_level,
                "max_words_per_edge_round": max(self.per_round_max_words, default=0),
                "max_attachment_paths": self.max_attachment_paths,
                "identical_to_sequential": self.identical, "spanner_sha256": self.spanner_hash}


def _paths_of(att) -> list[PathRec]:
    if hasattr(att, "park"):
        return list(att.park)
    return list(att)


def _digest(kept) -> str:
    return hashlib.sha256(" ".join(map(str, kept)).encode()).hexdigest()


class GuardedView:
    def __init__(self, inner, v, allowed):
        self._inner, self._v, self._allowed = inner, v, allowed

    def _guard(self, x):
        if x not in self._allowed:
            raise SimulationFault(f"vertex {self._v} read state of non-local vertex {x}")

    def vcolor(self, x):
        self._guard(x)
        return self._inner.vcolor(x)

    def center_level(self, x):
        self._guard(x)
        return self._inner.center_level(x)


class _Network(LevelHooks):
    def __init__(self, g: ColoredGraph, model: str, word_budget: float, capacity=None):
        self.g = g
        self.log = RoundLog(model, word_budget)
        self.known = [set([v]) | g.neighbors(v) for v in range(g.n)]
        self.capacity = capacity

    def _ship(self, loads: dict) -> int:
        """Rounds to deliver ``loads`` (directed edge -> words); logs per-round maxima."""
        if not loads:
            return 0
        B = self.log.word_budget
        if math.isinf(B):
            self.log.per_round_max_words.append(max(loads.values()))
            return 1
        rounds = max(math.ceil(w / B) for w in loads.values())
        for r in range(rounds):
            carried = [min(B, w - r * B) for w in loads.values() if w > r * B]
            top = max(carried)
            check(top <= B, "edge carried more than the word budget in one round")
            self.log.per_round_max_words.append(top)
        return rounds

    def level_start(self, i, undecided, engine):
        loads = {}
        for eid, ends in undecided.items():
            e = self.g.edge_by_id[eid]
            for x, att in ends.items():
                y = e.other(x)
                paths = _paths_of(att)
                self.log.max_attachment_paths = max(self.log.max_attachment_paths, len(paths))
                if self.capacity is not None:
                    check(len(paths) <= self.capacity(engine, i),
                          "attachment exceeds the park capacity bound", eid, len(paths))
                    self.log.capacity_checks += 1
                for p in paths:
                    self.known[y].update(p.vertices)
                # every edge is its own channel, parallel edges included
                loads[(x, eid)] = sum(p.words() for p in paths)
        r = self._ship(loads)
        self.log.rounds += r
        self.log.per_level.append({"level": i, "rounds": r,
                                   "edges": len(undecided), "words": sum(loads.values())})

    def view_for(self, v, i, engine):
        return GuardedView(engine.view, v, self.known[v])

    def exchange(self, i, name, payload, engine):
        loads = {(x, e.id): 1 for x in range(self.g.n) for e in self.g.adjacency[x]}
        r = self._ship(loads)
        self.log.rounds += r
        self.log.per_level[-1][name + "_rounds"] = r


def _ecft_capacity(engine, i):
    return engine.levels[i].capacity()


def _run(variant, g, f, k, cfg, seed, hooks):
    cfg = (cfg or SpannerConfig()).with_(seed=seed)
    if variant == "ecft":
        return build_ecft_spanner(g, f, k, cfg, hooks)
    if variant == "vcft":
        return build_vcft_spanner(g, f, k, cfg.with_(symmetry="distributed"), hooks)
    if variant == "parter_vft":
        return parter_vft(g, f, k, voting=cfg.voting, seed=seed, hooks=hooks)
    if variant == "baswana_sen":
        return baswana_sen(g, k, seed=seed, hooks=hooks)
    raise ValueError(f"unknown variant {variant!r}; pick one of {', '.join(VARIANTS)}")


def _simulate(g, f, k, variant, cfg, seed, model, budget):
    if budget <= 0:
        raise ValueError("word budget must be positive")
    capacity = _ecft_capacity if variant in ("ecft", "vcft") else None
    net = _Network(g, model, budget, capacity)
    res = _run(variant, g, f, k, cfg, seed, net)
    seq = _run(variant, g, f, k, cfg, seed, None)
    net.log.spanner_hash = _digest(res.kept)
    net.log.sequential_hash = _digest(seq.kept)
    check(net.log.identical, "simulated spanner differs from the sequential run", variant)
    if model == "local":
        check(net.log.rounds <= 3 * k, "LOCAL simulation used more than 3k rounds",
              net.log.rounds)
    res.extra["rounds"] = net.log.rounds
    return res, net.log


def simulate_local(g: ColoredGraph, f: int, k: int, variant: str = "ecft",
                   cfg: SpannerConfig | None = None, seed: int = 0):
    """Returns (SpannerResult, RoundLog) with unbounded messages."""
    return _simulate(g, f, k, variant, cfg, seed, "local", math.inf)


def simulate_congest(g: ColoredGraph, f: int, k: int, variant: str = "ecft",
                     word_budget: float = 64, cfg: SpannerConfig | None = None, seed: int = 0):
    """Returns (SpannerResult, RoundLog) with ``word_budget`` words per edge per round."""
    return _simulate(g, f, k, variant, cfg, seed, "congest", word_budget)
