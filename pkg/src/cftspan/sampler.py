"""Park sampling: thin an I-full touristic park ending at level-i centers down to
a touristic park ending at level-(i+1) centers that is I-full for the next
level's scores.

Centers are grouped into buckets by their next-level I-score. While some
bucket holds at least 1/rho centers, a batch of ceil(1/rho) of them is taken;
one batch member that survives to the next level donates its paths to the
output, the whole batch is discarded, and every link on which the output has
become full is discarded too. A batch with no surviving center is an error
event and ends the attempt.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import LemmaViolation, ParkViolation, check
from .park import Park, TouristicPark
from .params import LevelConfig
from .score import colorset, collection_score, subsets

FULL_PARK = "FULL_PARK"
FALLBACK = "FALLBACK"


@dataclass
class BucketView:
    scores: dict[int, Fraction]
    threshold: int

    def buckets(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for s, x in self.scores.items():
            if x > 0:
                out.setdefault(bucket_index(x), []).append(s)
        return {j: sorted(v) for j, v in sorted(out.items())}

    def heaviest_samplable(self):
        for j, members in self.buckets().items():
            if len(members) >= self.threshold:
                return j, members
        return None


def bucket_index(x: Fraction) -> int:
    """The j >= 1 with 2^-j < x <= 2^-(j-1)."""
    check(0 < x <= 1, "center score outside (0, 1]", x)
    j = 1
    while x <= Fraction(1, 1 << j):
        j += 1
    return j


@dataclass
class SampleOutcome:
    result: str
    park: TouristicPark | None = None
    witness: tuple = ()
    iterations: int = 0
    deleted_bucket: int = 0
    deleted_full: int = 0
    error_events: int = 0
    reason: str = ""
    input_paths: int = 0

    @property
    def ok(self) -> bool:
        return self.result == FULL_PARK


def park_sample(hat_p: TouristicPark, I, next_centers, cur: LevelConfig, nxt: LevelConfig,
                rng=None, audit: bool = False, accounting: bool | None = None) -> SampleOutcome:
    """Run the sampling loop on the I-link of ``hat_p``.

    ``next_centers`` is a set or a predicate on vertices. ``rng`` is unused:
    batch members are chosen by lowest id and survival is the pre-sampled
    center membership. ``accounting`` (default: paper mode) turns on the
    end-of-loop mass checks for a clean fallback.
    """
    I = colorset(I)
    is_next: Callable[[int], bool] = (next_centers if callable(next_centers)
                                      else next_centers.__contains__)
    if accounting is None:
        accounting = cur.paper
    gnext, lnext, ghat = nxt.gsc, nxt.lsc, cur.ghat
    size = cur.sample_size
    bound = nxt.capacity()

    source = hat_p.global_.link(I)
    out = SampleOutcome(FALLBACK, witness=I, input_paths=len(source))
    work: dict[int, Park] = {}
    for p in source:
        work.setdefault(p.end, Park(gnext, enforce=False)).add(p)
    buc: list = []
    col: list = []
    result = TouristicPark(hat_p.stem, gnext, lnext)

    def remaining():
        return [p for pk in work.values() for p in pk]

    def audit_s1():
        keys = [p.key for p in remaining()] + [p.key for p in buc] + [p.key for p in col]
        check(len(keys) == len(set(keys)) == len(source), "working sets overlap or leak")
        check(set(keys) == {p.key for p in source}, "working sets differ from the input")

    while True:
        view = BucketView({s: pk.score(I) for s, pk in work.items() if len(pk)}, size)
        pick = view.heaviest_samplable()
        if pick is None:
            break
        out.iterations += 1
        check(out.iterations <= bound, "sampling ran past its iteration bound", bound)
        _, members = pick
        batch = members[:size]
        hits = [s for s in batch if is_next(s)]
        if not hits:
            out.error_events += 1
            out.reason = "no next-level center in batch"
            return out
        star = hits[0]
        added = work[star].paths
        for p in added:
            try:
                result.insert(p, clamp=False)
            except ParkViolation as exc:
                raise LemmaViolation(f"sampled park stopped being touristic: {exc}") from None
        for s in batch:
            pk = work.pop(s)
            buc.extend(pk)
        touched = {J for p in added for J in subsets(p.colors)}
        for J in sorted(touched, key=lambda J: (len(J), J)):
            if not result.global_.is_full(J):
                continue
            for s in list(work):
                pk = work[s]
                for p in pk.link(J):
                    pk.remove(p)
                    col.append(p)
                if not len(pk):
                    del work[s]
        if audit:
            audit_s1()
            result.audit()

    out.deleted_bucket, out.deleted_full = len(buc), len(col)
    if audit:
        audit_s1()
    final = result.paths
    if final and result.global_.is_full(I):
        check(collection_score(gnext, (p.colors for p in final), I) > Fraction(1, 2),
              "sampled park fails the from-scratch fullness recount")
        if audit:
            result.audit()
        out.result, out.park = FULL_PARK, result
        return out
    out.reason = out.reason or "output not full"
    if accounting and out.error_events == 0:
        rest = collection_score(ghat, (p.colors for p in remaining()), I)
        gone = collection_score(ghat, (p.colors for p in buc), I)
        check(rest <= Fraction(1, 8), "leftover mass above 1/8 after a clean fallback", rest)
        check(gone <= Fraction(1, 8), "batch-deleted mass above 1/8 after a clean fallback", gone)
    return out
