"""Parks and touristic parks of colored paths.

A park is a path collection whose score on every color set J (its J-link
score) is at most 1. A touristic park stemming from ``v`` is a park under a
global score whose per-endpoint pieces are parks under a local score.

Scores are kept as integers over a common denominator, so updates and
fullness tests never build Fractions in the hot path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import LemmaViolation, ParkViolation
from .score import ScoreParams, colorset, subsets


@dataclass(frozen=True)
class PathRec:
    edge_ids: tuple[int, ...]
    vertices: tuple[int, ...]
    colors: tuple[int, ...]
    max_weight: float = 0.0

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def hop_len(self) -> int:
        return len(self.edge_ids)

    @property
    def key(self):
        return (self.edge_ids, self.vertices[0])

    def words(self) -> int:
        """Message cost of shipping this record."""
        return self.hop_len + len(self.colors) + 2

    def __repr__(self):
        return f"Path({'-'.join(map(str, self.vertices))} e={list(self.edge_ids)} c={list(self.colors)})"


def zero_path(u: int, colors: Iterable[int] = ()) -> PathRec:
    return PathRec((), (u,), colorset(colors), 0.0)


def prepend(edge, v: int, p: PathRec, step_color: int) -> PathRec:
    """The path ``e o P``: walk edge ``e`` from ``v`` to ``p.start``, then ``p``."""
    if edge.other(v) != p.start:
        raise ValueError("edge does not attach to the path start")
    cs = p.colors if step_color in p.colors else colorset(p.colors + (step_color,))
    return PathRec((edge.id,) + p.edge_ids, (v,) + p.vertices, cs, max(edge.w, p.max_weight))


def is_walk(g, p: PathRec) -> bool:
    if len(p.vertices) != len(p.edge_ids) + 1:
        return False
    for i, eid in enumerate(p.edge_ids):
        e = g.edge_by_id.get(eid)
        if e is None or {e.u, e.v} != {p.vertices[i], p.vertices[i + 1]}:
            return False
    return True


def recomputed_colors(g, p: PathRec) -> tuple[int, ...]:
    if g.mode == "ecft":
        return colorset(g.edge_by_id[e].color for e in p.edge_ids)
    return colorset(g.vertex_colors[x] for x in p.vertices)


class Park:
    """Path collection with an exact link-score index."""

    def __init__(self, params: ScoreParams, enforce: bool = True):
        self.params = params
        self.enforce = enforce
        self._items: dict = {}
        self._links: dict[tuple, dict[int, dict]] = {}
        self._num: dict[tuple, int] = {}
        self._tmax = 0
        self._den = params.beta.denominator
        self.link_updates = 0

    # -- score arithmetic over the common denominator beta_den * base^tmax
    def _contrib(self, t: int) -> int:
        return self.params.beta.numerator * self.params.base ** (self._tmax - t)

    def _grow(self, t: int):
        if t <= self._tmax:
            return
        scale = self.params.base ** (t - self._tmax)
        self._num = {J: x * scale for J, x in self._num.items()}
        self._den *= scale
        self._tmax = t

    def __len__(self):
        return len(self._items)

    def __iter__(self) -> Iterator[PathRec]:
        return iter(self._items.values())

    def __contains__(self, p: PathRec):
        return p.key in self._items

    @property
    def paths(self) -> list[PathRec]:
        return list(self._items.values())

    def score(self, J=()) -> Fraction:
        return Fraction(self._num.get(tuple(J), 0), self._den)

    def is_full(self, J=()) -> bool:
        return 2 * self._num.get(tuple(J), 0) > self._den

    def exceeds(self, J, threshold: Fraction) -> bool:
        """sc_J > threshold, exactly."""
        th = Fraction(threshold)
        return self._num.get(tuple(J), 0) * th.denominator > th.numerator * self._den

    def can_add(self, colors) -> bool:
        self._grow(len(colors))
        den = self._den
        for J in subsets(colors):
            if self._num.get(J, 0) + self._contrib(len(colors) - len(J)) > den:
                return False
        return True

    def violations(self, colors) -> list[tuple]:
        self._grow(len(colors))
        return [J for J in subsets(colors)
                if self._num.get(J, 0) + self._contrib(len(colors) - len(J)) > self._den]

    def add(self, p: PathRec):
        if p.key in self._items:
            raise ValueError(f"path {p} already present")
        cs = p.colors
        if self.enforce and not self.can_add(cs):
            raise ParkViolation(f"inserting {p} breaks the park property on {self.violations(cs)}")
        self._grow(len(cs))
        self._items[p.key] = p
        for J in subsets(cs):
            t = len(cs) - len(J)
            self._num[J] = self._num.get(J, 0) + self._contrib(t)
            self._links.setdefault(J, {}).setdefault(t, {})[p.key] = p
            self.link_updates += 1

    def remove(self, p: PathRec):
        del self._items[p.key]
        cs = p.colors
        for J in subsets(cs):
            t = len(cs) - len(J)
            self._num[J] -= self._contrib(t)
            bucket = self._links[J][t]
            del bucket[p.key]
            if not bucket:
                del self._links[J][t]
            if not self._links[J]:
                del self._links[J]
                del self._num[J]

    def link(self, J=()) -> list[PathRec]:
        """Paths whose colors contain J, by residual size then insertion order."""
        by_t = self._links.get(tuple(J), {})
        return [p for t in sorted(by_t) for p in by_t[t].values()]

    def link_counts(self, J=()) -> dict[int, int]:
        return {t: len(b) for t, b in sorted(self._links.get(tuple(J), {}).items())}

    def link_keys(self) -> list[tuple]:
        return sorted(self._links, key=lambda J: (len(J), J))

    def find_full_subset(self, colors) -> tuple | None:
        for J in subsets(colorset(colors)):
            if 2 * self._num.get(J, 0) > self._den:
                return J
        return None

    def max_link_score(self) -> Fraction:
        if not self._num:
            return Fraction(0)
        return Fraction(max(self._num.values()), self._den)

    def audit(self):
        """Recompute every link score path by path and compare with the index."""
        fresh: dict[tuple, Fraction] = {}
        for p in self._items.values():
            for J in subsets(p.colors):
                fresh[J] = fresh.get(J, Fraction(0)) + self.params.weight(len(p.colors) - len(J))
        if set(fresh) != set(self._num):
            raise LemmaViolation("link index keys disagree with the stored paths")
        for J, val in fresh.items():
            if self.score(J) != val:
                raise LemmaViolation(f"link score of {J} drifted: {self.score(J)} vs {val}")
            if self.enforce and val > 1:
                raise LemmaViolation(f"park property fails on {J}: score {val}")
        return True

    def dump(self) -> str:
        return "".join(f"{p.start} {p.end} {','.join(map(str, p.edge_ids)) or '-'} "
                       f"{','.join(map(str, p.colors)) or '-'}\n" for p in self)

    def copy(self) -> "Park":
        other = Park(self.params, self.enforce)
        for p in self:
            other.add(p)
        return other


class TouristicPark:
    """Paths stemming from ``stem``: a global park plus one local park per endpoint.

    With ``global_params=None`` only the local parks are enforced; a global
    index is still kept (unenforced, under the local params) for iteration.
    """

    def __init__(self, stem: int, global_params: ScoreParams | None, local_params: ScoreParams):
        self.stem = stem
        self.local_params = local_params
        self.global_enforced = global_params is not None
        self.global_ = Park(global_params or local_params, enforce=self.global_enforced)
        self.locals: dict[int, Park] = {}
        self.clamped = 0

    def __len__(self):
        return len(self.global_)

    def __iter__(self):
        return iter(self.global_)

    def __contains__(self, p):
        return p in self.global_

    @property
    def paths(self):
        return self.global_.paths

    def local(self, s: int) -> Park:
        pk = self.locals.get(s)
        if pk is None:
            pk = self.locals[s] = Park(self.local_params)
        return pk

    def ends(self) -> list[int]:
        return sorted(s for s, pk in self.locals.items() if len(pk))

    def can_insert(self, p: PathRec) -> bool:
        if self.global_enforced and not self.global_.can_add(p.colors):
            return False
        return self.local(p.end).can_add(p.colors)

    def insert(self, p: PathRec, clamp: bool = True) -> str:
        if p.start != self.stem:
            raise ValueError(f"path {p} does not stem from {self.stem}")
        if not self.can_insert(p):
            if not clamp:
                raise ParkViolation(f"inserting {p} into the park at {self.stem} breaks it")
            self.clamped += 1
            return "clamped"
        self.global_.add(p)
        self.local(p.end).add(p)
        return "inserted"

    def remove(self, p: PathRec):
        self.global_.remove(p)
        self.locals[p.end].remove(p)

    def audit(self):
        self.global_.audit()
        count = 0
        for s, pk in self.locals.items():
            pk.audit()
            for p in pk:
                if p.end != s or p not in self.global_:
                    raise LemmaViolation(f"local park at {s} holds foreign path {p}")
                count += 1
        if count != len(self.global_):
            raise LemmaViolation("local parks do not partition the global park")
        return True

    def restricted(self, J) -> "TouristicPark":
        """A fresh touristic park holding only the J-link (same params)."""
        tp = TouristicPark(self.stem, self.global_.params if self.global_enforced else None,
                           self.local_params)
        for p in self.global_.link(J):
            tp.insert(p, clamp=False)
        return tp


# ------------------------------------------------------------ operations

def insert_path(tp: TouristicPark, p: PathRec, clamp: bool = True) -> str:
    return tp.insert(p, clamp)


def find_full_subset(pk: Park, colors) -> tuple | None:
    return pk.find_full_subset(colors)


def surviving_path(pk: Park, J, F) -> PathRec:
    """A path of the J-link avoiding every color of F.

    Needs ``J`` disjoint from ``F`` and ``sc_J > 1/alpha``; under those
    conditions a park always contains one, so failure raises LemmaViolation.
    """
    J, Fs = colorset(J), frozenset(getattr(F, "colors", F))
    if Fs & set(J):
        raise ValueError("J meets the fault set")
    if not pk.exceeds(J, Fraction(1, pk.params.alpha)):
        raise ValueError("J-link score is not above 1/alpha")
    for p in pk.link(J):
        if not Fs.intersection(p.colors):
            return p
    raise LemmaViolation(f"no surviving path: J={J} F={sorted(Fs)} score={pk.score(J)} "
                         f"park of {len(pk)} paths, max link score {pk.max_link_score()}")


def _randbelow(rng, bound: int) -> int:
    """Uniform integer in [0, bound) for arbitrarily large bound."""
    if bound <= 1 << 62:
        return int(rng.integers(bound))
    nbits = bound.bit_length()
    nbytes = (nbits + 7) // 8
    while True:
        x = int.from_bytes(rng.bytes(nbytes), "little") >> (8 * nbytes - nbits)
        if x < bound:
            return x


def sample_weighted(pk: Park, I, rng) -> PathRec:
    """Draw from the I-link with probability proportional to sc_I(P)."""
    by_t = pk._links.get(colorset(I))
    if not by_t:
        raise ValueError(f"empty {colorset(I)}-link")
    ts = sorted(by_t)
    masses = [len(by_t[t]) * pk._contrib(t) for t in ts]
    x = _randbelow(rng, sum(masses))
    for t, mass in zip(ts, masses):
        if x < mass:
            bucket = list(by_t[t].values())
            return bucket[int(rng.integers(len(bucket)))]
        x -= mass
    raise AssertionError("unreachable")
