"""
Vertex-colored faults
=====================

Here colors sit on vertices and a failed color removes every vertex of that
color with its edges. The last level charges kept edges to one endpoint by
two rules; both the sequential and the distributed tie-breaking are shown.
"""

# %%
from cftspan import SpannerConfig, build_vcft_spanner, generate_random, verify_cft

g = generate_random("vcft", 12, 100, color_count=3, seed=11)

# %%
for symmetry in ("sequential", "distributed"):
    res = build_vcft_spanner(g, 2, 2, SpannerConfig(seed=11, symmetry=symmetry, audit=True))
    print(symmetry, "kept", res.size, "type-1", res.extra["type1"], "type-2", res.extra["type2"])
    print("  passes:", verify_cft(g, res.kept, 2, 2).passed)
