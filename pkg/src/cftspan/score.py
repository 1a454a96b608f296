"""Exact (alpha, beta) scores over color sets.

A path with color set ``c`` has score ``beta * (alpha*f) ** -(|c - J|)`` on a
color set ``J`` contained in ``c`` and zero otherwise. Collection scores are
sums. Everything is a :class:`fractions.Fraction`; nothing is ever rounded.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

ScoreValue = Fraction


def colorset(cs: Iterable[int]) -> tuple[int, ...]:
    """Canonical key for a color set: sorted tuple without repeats."""
    return tuple(sorted(set(cs)))


def subsets(cs: tuple[int, ...]):
    """All subsets of a canonical color set, by size then lexicographically."""
    for r in range(len(cs) + 1):
        yield from combinations(cs, r)


def is_subset(J: tuple, cs: tuple) -> bool:
    return set(J) <= set(cs)


@dataclass(frozen=True)
class ScoreParams:
    alpha: int
    beta: Fraction
    f: int

    def __post_init__(self):
        object.__setattr__(self, "beta", Fraction(self.beta))
        if int(self.alpha) != self.alpha or self.alpha < 2:
            raise ValueError("alpha must be an integer >= 2")
        object.__setattr__(self, "alpha", int(self.alpha))
        if not 0 < self.beta <= 1:
            raise ValueError("beta must lie in (0, 1]")
        if self.f < 1:
            raise ValueError("f must be >= 1")

    @property
    def base(self) -> int:
        return self.alpha * self.f

    def weight(self, t: int) -> Fraction:
        """Score of one path whose residual color count is ``t``."""
        return self.beta / Fraction(self.base) ** t

    def __repr__(self):
        a = self.alpha
        a_txt = str(a) if a < 10**6 else f"~2^{a.bit_length() - 1}"
        return f"ScoreParams(alpha={a_txt}, beta={self.beta}, f={self.f})"


def path_score(params: ScoreParams, colors: Iterable[int], J: Iterable[int]) -> Fraction:
    cs, js = set(colors), set(J)
    if not js <= cs:
        return Fraction(0)
    return params.weight(len(cs - js))


def collection_score(params: ScoreParams, color_sets: Iterable[Iterable[int]], J) -> Fraction:
    J = tuple(J)
    return sum((path_score(params, c, J) for c in color_sets), Fraction(0))


_OPS = {"<": operator.lt, "<=": operator.le, "≤": operator.le, "=": operator.eq,
        "==": operator.eq, ">": operator.gt, ">=": operator.ge, "≥": operator.ge}


def compare(a, op: str, b) -> bool:
    """Exact comparison of two rationals (ints and Fractions accepted)."""
    if isinstance(a, float) or isinstance(b, float):
        raise TypeError("scores are exact; floats are not accepted")
    return _OPS[op](Fraction(a), Fraction(b))


def is_full(value) -> bool:
    return Fraction(value) > Fraction(1, 2)
