"""
The online fault-tolerance game
===============================

Bob presents sets of at most k elements; Alice keeps or drops each one at
once. Whatever f elements later fail, if some presented set survives then a
kept one must too. The forcing strategy makes the optimal Alice keep exactly
C(f + k, k) sets, while the park strategy keeps at most 2 (2f)^k.
"""

# %%
from math import comb

from cftspan.ftgame import bob_forcing, check_certificate, play

for f, k in [(1, 1), (2, 2), (3, 2), (2, 4)]:
    sets = list(bob_forcing(f, k))
    opt = play(f, k, "optimal", sets, universe=range(f + k))
    park = play(f, k, "park", sets, universe=range(f + k))
    print(f"f={f} k={k}: optimal {len(opt.kept)} (C = {comb(f + k, k)}), park {len(park.kept)} "
          f"(bound {park.size_bound()}), certificate {check_certificate(range(f + k), sets, park.kept, f)}")
