"""
Baselines: Baswana-Sen, vertex-fault Parter, greedy
===================================================
"""

# %%
import numpy as np

from cftspan import generate_random, verify_cft, verify_plain, verify_vft
from cftspan.baselines import baswana_sen, greedy_cft, parter_vft

g = generate_random("ecft", 30, 300, color_count=1, seed=2, simple=True)

# %%
# Plain clustering spanner, checked on all pairs.
for k in (2, 3):
    bs = baswana_sen(g, k, seed=2)
    print("Baswana-Sen k =", k, "size", bs.size, "ok", verify_plain(g, bs.kept, k, all_pairs=True).passed)

# %%
# Vertex-fault tolerant variant on a smaller graph, exhaustively verified.
h = generate_random("ecft", 18, 80, color_count=1, seed=4, simple=True)
pv = parter_vft(h, 1, 2, seed=4)
print("Parter size", pv.size, "ok", verify_vft(h, pv.kept, 1, 2).passed)

# %%
# Greedy size over a few colored graphs.
sizes = []
for seed in range(5):
    c = generate_random("ecft", 14, 60, color_count=4, seed=seed)
    gr = greedy_cft(c, 1, 2)
    assert verify_cft(c, gr.kept, 1, 2).passed
    sizes.append(gr.size / c.m)
print("greedy keeps on average", f"{np.mean(sizes):.0%}", "of the edges")
