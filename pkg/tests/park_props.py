"""Randomized parks and fault sets for the surviving-path property."""

from __future__ import annotations

from fractions import Fraction

from cftspan.park import Park, PathRec, surviving_path
from cftspan.score import ScoreParams, colorset

import oracles


def random_park(rng, universe=None, attempts=None):
    universe = universe or rng.randint(2, 8)
    params = ScoreParams(rng.choice([2, 3, 4, 9]), rng.choice([1, Fraction(1, 2), Fraction(1, 3)]),
                         rng.randint(1, 3))
    pk = Park(params)
    for j in range(attempts or rng.randint(1, 40)):
        cs = colorset(rng.sample(range(universe), rng.randint(0, min(4, universe))))
        if pk.can_add(cs):
            pk.add(PathRec((j,), (0, j + 1), cs))
    return pk, universe


def draw_survival(rng, tries=50):
    """(park, J, F) meeting the precondition, checked by recomputing scores from scratch.

    Returns None when no link of a random park clears 1/alpha.
    """
    for _ in range(tries):
        pk, universe = random_park(rng)
        p = pk.params
        sets = [q.colors for q in pk]
        heavy = [J for J in oracles.all_subsets(range(universe))
                 if oracles.total_score(p.alpha, p.beta, p.f, sets, J) > Fraction(1, p.alpha)]
        if not heavy:
            continue
        J = rng.choice(heavy)
        rest = [c for c in range(universe) if c not in J]
        F = frozenset(rng.sample(rest, rng.randint(0, min(p.f, len(rest)))))
        return pk, J, F
    return None


def check_survival(pk, J, F):
    assert oracles.is_park(pk.params.alpha, pk.params.beta, pk.params.f, [q.colors for q in pk])
    P = surviving_path(pk, J, F)
    assert P in pk
    assert set(J) <= set(P.colors)
    assert not set(P.colors) & set(F)
    return P
