"""Seeded instance corpus shared by the acceptance and integration tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cftspan.graph import generate_random

COLORINGS = ("uniform", "monochromatic-biased")


@dataclass(frozen=True)
class Instance:
    index: int
    n: int
    m: int
    colors: int
    f: int
    k: int
    coloring: str
    seed: int

    def graph(self, mode="ecft"):
        coloring = self.coloring if mode == "ecft" else "uniform"
        return generate_random(mode, self.n, self.m, color_count=self.colors,
                               coloring=coloring, seed=self.seed)


def corpus(size=200, base_seed=20240601):
    """Instances with n <= 30, m <= 120, at most 8 colors, f in {1, 2}, k in {2, 3}.

    Every third instance is a small dense multigraph with few colors, where
    vertices see the same colors often enough to postpone edges.
    """
    rng = np.random.default_rng(base_seed)
    out = []
    for j in range(size):
        f = 1 + j % 2
        k = 2 + (j // 2) % 2
        if j % 3 == 0:
            n = int(rng.integers(8, 15))
            m = int(rng.integers(6 * n, 121)) if 6 * n < 121 else 120
            colors = int(rng.integers(1, 4))
            coloring = "monochromatic-biased"
        else:
            n = int(rng.integers(6, 31))
            m = int(rng.integers(n, min(120, n * (n - 1) // 2) + 1))
            colors = int(rng.integers(1, 9))
            coloring = COLORINGS[j % 2]
        out.append(Instance(j, n, m, colors, f, k, coloring, base_seed + j))
    return out


@dataclass(frozen=True)
class SimpleInstance:
    index: int
    n: int
    m: int
    colors: int
    f: int
    coloring: str
    seed: int

    def graph(self):
        return generate_random("ecft", self.n, self.m, color_count=self.colors,
                               coloring=self.coloring, seed=self.seed, simple=True)


WARMUP_SHAPES = (
    # (n, m, colors, coloring)
    (25, 40, 12, "legal"),
    (30, 120, 20, "legal"),
    (30, 300, 1, "uniform"),
    (30, 400, 3, "monochromatic-biased"),
    (40, 500, 2, "uniform"),
)


def warmup_corpus(size=50, base_seed=777):
    """Simple graphs with legal, single-color, biased and uniform colorings; f in 1..3."""
    return [SimpleInstance(j, *WARMUP_SHAPES[j % len(WARMUP_SHAPES)][:3], 1 + j % 3,
                           WARMUP_SHAPES[j % len(WARMUP_SHAPES)][3], base_seed + j)
            for j in range(size)]
