"""
Distributed round counts
========================

The constructions replayed as synchronous message passing. LOCAL ships whole
attachments in one round per level; CONGEST caps each edge at a word budget
and splits big attachments across rounds. Both must reproduce the sequential
spanner bit for bit.
"""

# %%
from cftspan import generate_random
from cftspan.distsim import VARIANTS, simulate_congest, simulate_local

g = generate_random("ecft", 12, 120, color_count=2, coloring="monochromatic-biased", seed=1)
simple = generate_random("ecft", 16, 70, color_count=1, seed=1, simple=True)
vg = generate_random("vcft", 12, 60, color_count=3, seed=1)
graphs = {"ecft": g, "vcft": vg, "parter_vft": simple, "baswana_sen": g}

# %%
for variant in VARIANTS:
    _, local = simulate_local(graphs[variant], 1, 3, variant, seed=1)
    _, tight = simulate_congest(graphs[variant], 1, 3, variant, word_budget=2, seed=1)
    print(f"{variant:12} LOCAL {local.rounds} rounds, CONGEST(2 words) {tight.rounds} rounds, "
          f"same output: {local.identical and tight.identical}")
