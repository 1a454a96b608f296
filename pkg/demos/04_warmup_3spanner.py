"""
A direct 3-spanner for simple graphs
====================================

The two-level construction for k = 2 stores a few paths per color at each
center and marks an edge safe when enough vote paths hit stored ones. With
auditing on, each safe edge is replayed: for every relevant fault set the
code rebuilds a surviving detour of at most three edges.
"""

# %%
from cftspan import generate_random, verify_cft
from cftspan.warmup import warmup_3spanner

g = generate_random("ecft", 30, 300, color_count=1, seed=5, simple=True)
res = warmup_3spanner(g, f=2, seed=5, audit=True)
print("kept", res.size, "of", g.m)
print(res.extra)
print("verified:", verify_cft(g, res.kept, 2, 2).passed)
