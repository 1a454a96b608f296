"""Per-level score parameters and run configuration.

Two parameter families exist. ``paper`` uses D = 16 with

    alpha_i = D^(10k(4k-2i)),   beta_i = D^(-2i),
    alpha^_i = D^(10k(4k-2i-1)), beta^_i = D^(-2i-5),

which makes every fullness threshold unreachable on small graphs. ``practical``
keeps the same shape with much smaller gaps so that postponing and park
sampling actually happen on desk-scale inputs:

    alpha_i = 8 D^(2(k-i)),  alpha^_i = 8 D^(2(k-i)-1),
    beta_i = D^(-2i),        beta^_i = D^(-2i-3).

In both, rho = p / (c_rho k (ln n + k^2)) capped at 1, and the four score
functions of a level are gsc = (alpha_i, beta_i), lsc = (2, beta_i),
ghat = (alpha^_i, beta^_i rho), lhat = (2, beta_i / D).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .score import ScoreParams

PAPER = "paper"
PRACTICAL = "practical"

# defaults for the tunable constants
PAPER_D = 16
PRACTICAL_D = 2
PAPER_RHO_CONST = Fraction(1)
PRACTICAL_RHO_CONST = Fraction(1, 40)
SAMPLE_CONST = 48


@dataclass(frozen=True)
class SpannerConfig:
    mode: str = PRACTICAL
    d_const: int | None = None
    rho_const: Fraction | None = None
    voting: str = "exact"
    audit: bool = False
    seed: int = 0
    sample_const: int = SAMPLE_CONST
    symmetry: str = "sequential"
    trace: bool = False

    def __post_init__(self):
        if self.mode not in (PAPER, PRACTICAL):
            raise ValueError(f"unknown parameter mode {self.mode!r}")
        if self.voting not in ("exact", "sampled"):
            raise ValueError(f"unknown voting mode {self.voting!r}")
        if self.symmetry not in ("sequential", "distributed"):
            raise ValueError(f"unknown symmetry rule {self.symmetry!r}")
        if self.mode == PAPER and self.d_const not in (None, PAPER_D):
            raise ValueError("paper mode fixes D = 16")
        if self.d_const is not None and self.d_const < 2:
            raise ValueError("D must be at least 2")

    @property
    def D(self) -> int:
        if self.d_const is not None:
            return int(self.d_const)
        return PAPER_D if self.mode == PAPER else PRACTICAL_D

    @property
    def c_rho(self) -> Fraction:
        if self.rho_const is not None:
            return Fraction(self.rho_const)
        return PAPER_RHO_CONST if self.mode == PAPER else PRACTICAL_RHO_CONST

    @property
    def paper(self) -> bool:
        return self.mode == PAPER

    def with_(self, **kw) -> "SpannerConfig":
        return replace(self, **kw)


@dataclass(frozen=True)
class LevelConfig:
    k: int
    f: int
    i: int
    n: int
    D: int
    p: float
    rho: Fraction
    alpha: int
    beta: Fraction
    alpha_hat: int
    beta_hat: Fraction
    paper: bool

    @property
    def gsc(self) -> ScoreParams:
        return ScoreParams(self.alpha, self.beta, self.f)

    @property
    def lsc(self) -> ScoreParams:
        return ScoreParams(2, self.beta, self.f)

    @property
    def ghat(self) -> ScoreParams:
        return ScoreParams(self.alpha_hat, self.beta_hat * self.rho, self.f)

    @property
    def lhat(self) -> ScoreParams:
        return ScoreParams(2, self.beta / self.D, self.f)

    @property
    def sample_size(self) -> int:
        """Size of a bucket sample, the rounded-up 1/rho."""
        return math.ceil(1 / self.rho)

    def capacity(self) -> int:
        """Largest possible park under gsc for paths with ``i`` residual colors."""
        return int(1 / self.beta) * (self.alpha * self.f) ** self.i


def exponents(mode: str, k: int, i: int) -> tuple[int, int, int, int]:
    """(a, b, ah, bh) with alpha = c D^a, beta = D^-b, and so on."""
    if mode == PAPER:
        return 10 * k * (4 * k - 2 * i), 2 * i, 10 * k * (4 * k - 2 * i - 1), 2 * i + 5
    return 2 * (k - i), 2 * i, 2 * (k - i) - 1, 2 * i + 3


def sampling_probability(n: int, k: int, f: int = 1, vertex_faults: bool = False) -> float:
    base = n / f if vertex_faults else n
    if base <= 1:
        return 1.0
    return min(1.0, base ** (-1.0 / k))


def level_config(n: int, k: int, f: int, i: int, cfg: SpannerConfig,
                 vertex_faults: bool = False) -> LevelConfig:
    if k < 1 or not 0 <= i <= k:
        raise ValueError("need k >= 1 and 0 <= i <= k")
    D = cfg.D
    p = sampling_probability(n, k, f, vertex_faults)
    denom = float(cfg.c_rho) * k * (math.log(max(n, 2)) + k * k)
    rho = Fraction(min(1.0, p / denom)).limit_denominator(1 << 40)
    if rho <= 0:
        raise ValueError("rho underflowed; pick a smaller rho constant")
    a, b, ah, bh = exponents(cfg.mode, k, i)
    mult = 1 if cfg.paper else 8
    lc = LevelConfig(k=k, f=f, i=i, n=n, D=D, p=p, rho=rho,
                     alpha=mult * D ** max(a, 0), beta=Fraction(1, D ** b),
                     alpha_hat=mult * D ** max(ah, 0), beta_hat=Fraction(1, D ** bh),
                     paper=cfg.paper)
    if i < k and (lc.alpha <= 8 or lc.alpha_hat <= 8):
        raise AssertionError("global alpha must exceed 8 at every working level")
    return lc


def normalize_f(f: int) -> int:
    if f < 0:
        raise ValueError("f must be nonnegative")
    if f == 0:
        warnings.warn("f = 0 is treated as f = 1 (scores need a positive fault budget)",
                      stacklevel=3)
        return 1
    return f


# ------------------------------------------------------------- randomness

_CENTER_TAG = 1
_VOTE_TAG = 2


def vertex_rng(seed: int, tag: int, *keys: int) -> np.random.Generator:
    """Independent stream per (seed, purpose, vertex, ...)."""
    return np.random.default_rng([seed & 0xFFFFFFFFFFFF, tag, *keys])


def sample_center_levels(n: int, k: int, p: float, seed: int) -> list[int]:
    """Largest j with v in S_j; each level keeps a center with probability p."""
    levels = []
    for v in range(n):
        rng = vertex_rng(seed, _CENTER_TAG, v)
        lvl = 0
        while lvl < k - 1 and rng.random() < p:
            lvl += 1
        levels.append(lvl)
    return levels


def vote_rng(seed: int, level: int, v: int) -> np.random.Generator:
    return vertex_rng(seed, _VOTE_TAG, level, v)
