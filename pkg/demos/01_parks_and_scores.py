"""
Parks: path collections with bounded link scores
================================================

A path whose color set is C contributes beta * (alpha f)^-(|C - J|) to the
score of every J contained in C. A park keeps every such link score at most 1,
which caps how many paths can share a color pattern. Fullness (a score above
1/2) is what later guarantees that some stored path dodges f faulty colors.
"""

# %%
from fractions import Fraction

from cftspan.park import Park, PathRec, surviving_path
from cftspan.score import ScoreParams, collection_score

params = ScoreParams(alpha=4, beta=Fraction(1, 2), f=2)
print(params, "one fresh color costs a factor", params.base)

# %%
# Scores are exact rationals. Under J = () each single-color path adds
# (1/2) / 8 and the two-color path (1/2) / 64. Under J = (0,) the color-0
# path pays for no extra color and adds the full 1/2.
sets = [(0,), (1,), (0, 1)]
for J in [(), (0,), (0, 1)]:
    print(J, collection_score(params, sets, J))

# %%
# Filling a park. Paths that would push some link past 1 are refused.
pk = Park(params)
refused = 0
for j in range(12):
    cs = (j % 3,)
    if pk.can_add(cs):
        pk.add(PathRec((j,), (0, j + 1), cs))
    else:
        refused += 1
print(len(pk), "paths stored,", refused, "refused; max link score", pk.max_link_score())

# %%
# Once the (0,)-link is heavy enough, a path survives any fault set that
# spares color 0.
print("(0,)-link full:", pk.is_full((0,)))
print("survivor when colors 1 and 2 fail:", surviving_path(pk, (0,), {1, 2}))
