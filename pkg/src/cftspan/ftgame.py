"""The online fault-tolerance game on set systems.

Bob presents sets of at most k elements of a universe C one at a time. Alice
keeps or irrevocably discards each one, and wants her kept sets to be a
certificate: for every F with |F| <= f, if some presented set avoids F then
some kept set avoids F.

Strategies:

* ``optimal`` keeps P exactly when some F of size <= f avoiding P hits
  every set kept so far (otherwise P is redundant).
* ``park`` keeps P unless the kept sets, scored with alpha = 2 and
  beta = 1/2, are already full on some J contained in P.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import BudgetExceeded, check
from .park import Park, PathRec
from .score import ScoreParams, colorset

OPTIMAL, PARK = "optimal", "park"
DEFAULT_BUDGET = 1_000_000


def bob_forcing(f: int, k: int):
    """Every k-subset of a universe of f + k elements, in lexicographic order."""
    if f < 0 or k < 1:
        raise ValueError("need f >= 0 and k >= 1")
    yield from combinations(range(f + k), k)


@dataclass
class GameState:
    universe: tuple
    f: int
    k: int
    strategy: str
    presented: list = field(default_factory=list)
    kept: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    park: Park | None = None
    max_step_updates: int = 0
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.strategy not in (OPTIMAL, PARK):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.strategy == PARK:
            self.park = Park(ScoreParams(2, Fraction(1, 2), max(self.f, 1)))

    def size_bound(self) -> int:
        """Largest kept collection the park strategy can reach."""
        return 2 * (2 * max(self.f, 1)) ** self.k

    def summary(self) -> dict:
        return {"strategy": self.strategy, "f": self.f, "k": self.k,
                "universe": len(self.universe), "presented": len(self.presented),
                "kept": len(self.kept), "max_step_link_updates": self.max_step_updates}


def _hitting_set(universe, avoid, kept, f, budget):
    pool = [c for c in universe if c not in avoid]
    r = min(f, len(pool))
    if comb(len(pool), r) > budget:
        raise BudgetExceeded(f"{comb(len(pool), r)} candidate fault sets exceed {budget}")
    for F in combinations(pool, r):
        Fs = set(F)
        if all(Fs.intersection(K) for K in kept):
            return F
    return None


def alice_step(state: GameState, P) -> str:
    """Decide on P, record it, and return 'keep' or 'discard'."""
    P = colorset(P)
    check(len(P) <= state.k, "presented set larger than k", P)
    if not set(P) <= set(state.universe):
        raise ValueError(f"set {P} leaves the universe")
    step = len(state.presented)
    state.presented.append(P)
    if state.strategy == OPTIMAL:
        keep = _hitting_set(state.universe, P, state.kept, state.f, state.budget) is not None
    else:
        pk = state.park
        keep = pk.find_full_subset(P) is None
        if keep:
            before = pk.link_updates
            pk.add(PathRec((step,), (0,), P))
            delta = pk.link_updates - before
            state.max_step_updates = max(state.max_step_updates, delta)
            check(delta <= 2 ** state.k, "park update touched more than 2^k links", delta)
    if keep:
        state.kept.append(P)
    if state.strategy == PARK:
        check(len(state.kept) <= state.size_bound(), "park strategy kept too many sets",
              len(state.kept))
    verdict = "keep" if keep else "discard"
    state.trace.append(f"{verdict} {{{','.join(map(str, P))}}}")
    return verdict


def play(f: int, k: int, alice: str, sets, universe=None) -> GameState:
    sets = [colorset(s) for s in sets]
    if universe is None:
        universe = sorted({c for s in sets for c in s})
    state = GameState(tuple(universe), f, k, alice)
    for P in sets:
        alice_step(state, P)
    return state


def check_certificate(universe, all_sets, kept_sets, f: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Every fault set of size <= f that spares a presented set spares a kept set."""
    universe = list(universe)
    total = sum(comb(len(universe), j) for j in range(min(f, len(universe)) + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} fault sets exceed the budget of {budget}")
    all_sets = [set(s) for s in all_sets]
    kept_sets = [set(s) for s in kept_sets]
    for j in range(min(f, len(universe)) + 1):
        for F in combinations(universe, j):
            Fs = set(F)
            if any(Fs.isdisjoint(s) for s in all_sets) and \
                    not any(Fs.isdisjoint(s) for s in kept_sets):
                return False
    return True


def parse_sets(text: str) -> list[tuple]:
    """One set per line, elements separated by spaces or commas; '{}' is the
    empty set and '#' starts a comment."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        body = line.removeprefix("keep").removeprefix("discard").strip().strip("{}")
        try:
            out.append(colorset(int(x) for x in body.replace(",", " ").split()))
        except ValueError:
            raise ValueError(f"line {lineno}: expected integers, got {raw!r}") from None
    return out
