"""Command-line front end: ``cftspan {gen,span,verify,sim,game,bench}``.

Exit codes: 0 success, 1 verification or certificate failure, 2 usage or
input error, 3 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from fractions import Fraction
from pathlib import Path

from .baselines import baswana_sen, greedy_cft, parter_vft
from .distsim import VARIANTS, simulate_congest, simulate_local
from .ecft import build_ecft_spanner, parse_spanner
from .errors import BudgetExceeded, LemmaViolation, SimulationFault
from .ftgame import bob_forcing, check_certificate, parse_sets, play
from .graph import ECFT, VCFT, GraphFormatError, generate_random, parse_graph, serialize_graph
from .params import SpannerConfig
from .vcft import build_vcft_spanner
from .verifier import spanner_stats, verify_cft, verify_plain, verify_vft
from .warmup import warmup_3spanner

ALGOS = ("ecft", "vcft", "warmup3", "baswana-sen", "parter-vft", "greedy")


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, default=str) + "\n"


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbelow(2 ** 32)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _load_graph(path):
    try:
        return parse_graph(Path(path).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read graph: {exc}") from None


def _config(args) -> SpannerConfig:
    return SpannerConfig(mode=args.mode, d_const=args.d_const,
                         rho_const=Fraction(args.rho_const) if args.rho_const else None,
                         voting=args.voting, audit=args.audit, seed=args.seed,
                         symmetry=args.symmetry)


def _add_config(p):
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--mode", choices=("paper", "practical"), default="practical")
    p.add_argument("--d-const", type=int)
    p.add_argument("--rho-const", help="rational, e.g. 1/40")
    p.add_argument("--voting", choices=("exact", "sampled"), default="exact")
    p.add_argument("--symmetry", choices=("sequential", "distributed"), default="sequential")
    p.add_argument("--audit", action="store_true")
    p.add_argument("--seed", type=int)


def build(algo: str, g, args):
    cfg = _config(args)
    if algo == "ecft":
        return build_ecft_spanner(g, args.f, args.k, cfg)
    if algo == "vcft":
        return build_vcft_spanner(g, args.f, args.k, cfg)
    if algo == "warmup3":
        if not g.is_simple():
            raise UsageError("warmup3 needs a simple graph; the input has parallel edges")
        return warmup_3spanner(g, args.f, seed=args.seed, audit=args.audit)
    if algo == "baswana-sen":
        return baswana_sen(g, args.k, seed=args.seed)
    if algo == "parter-vft":
        if not g.is_simple():
            raise UsageError("parter-vft needs a simple graph; the input has parallel edges")
        return parter_vft(g, args.f, args.k, voting=args.voting, seed=args.seed, audit=args.audit)
    return greedy_cft(g, args.f, args.k)


# ------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    seed = _seed(args)
    lo, hi = args.weights
    g = generate_random(args.mode, args.n, args.m, density=args.density,
                        color_count=args.colors, weight_range=(lo, hi),
                        coloring=args.coloring, seed=seed, simple=args.simple,
                        integer_weights=args.integer_weights)
    _emit(serialize_graph(g), args.out)
    return 0


def cmd_span(args) -> int:
    g = _load_graph(args.graph)
    _seed(args)
    res = build(args.algo, g, args)
    _emit(res.spanner_text(), args.out)
    rep = res.report()
    rep["seed"] = args.seed
    rep.update(spanner_stats(g, res.kept, res.k, res.f or None))
    if args.report:
        Path(args.report).write_text(_dump(rep))
    elif args.out:
        sys.stdout.write(_dump(rep))
    return 0


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    try:
        k, f, ids = parse_spanner(Path(args.spanner).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read spanner: {exc}") from None
    k = args.k or k
    f = args.f if args.f is not None else f
    mode = "sampled" if args.sample else "exact"
    seed = _seed(args) if mode == "sampled" else 0
    common = dict(mode=mode, trials=args.sample or 0, seed=seed, jobs=args.jobs,
                  all_pairs=args.all_pairs)
    if args.kind == "cft":
        rep = verify_cft(g, ids, f, k, **common)
    elif args.kind == "vft":
        rep = verify_vft(g, ids, f, k, **common)
    else:
        rep = verify_plain(g, ids, k, all_pairs=args.all_pairs)
    _emit(_dump(rep.summary()), args.out)
    return 0 if rep.passed else 1


def cmd_sim(args) -> int:
    g = _load_graph(args.graph)
    seed = _seed(args)
    cfg = _config(args)
    if args.model == "local":
        res, log = simulate_local(g, args.f, args.k, args.variant, cfg, seed)
    else:
        res, log = simulate_congest(g, args.f, args.k, args.variant, args.word_budget, cfg, seed)
    out = log.summary()
    out.update({"variant": args.variant, "size": res.size, "seed": seed})
    _emit(_dump(out), args.out)
    return 0


def cmd_game(args) -> int:
    if args.bob == "forcing":
        sets, universe = list(bob_forcing(args.f, args.k)), range(args.f + args.k)
    else:
        if not args.sets:
            raise UsageError("--bob file needs --sets FILE")
        try:
            sets = parse_sets(Path(args.sets).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read sets: {exc}") from None
        universe = None
    state = play(args.f, args.k, args.alice, sets, universe)
    valid = check_certificate(state.universe, state.presented, state.kept, args.f)
    summary = state.summary()
    summary["certificate_valid"] = valid
    if args.alice == "park":
        summary["size_bound"] = state.size_bound()
    if args.trace:
        Path(args.trace).write_text("".join(line + "\n" for line in state.trace))
    _emit(_dump(summary), args.out)
    return 0 if valid else 1


def cmd_bench(args) -> int:
    base = args.seed if args.seed is not None else 0
    rows = []
    failures = 0
    for j in range(args.seeds):
        seed = base + j
        g = generate_random(args.graph_mode, args.n, args.m, density=args.density,
                            color_count=args.colors, coloring=args.coloring, seed=seed,
                            simple=args.simple)
        for algo in args.algos.split(","):
            if algo not in ALGOS:
                raise UsageError(f"unknown algorithm {algo!r}")
            ns = argparse.Namespace(**vars(args))
            ns.seed = seed
            res = build(algo, g, ns)
            if algo == "baswana-sen":
                ok = verify_plain(g, res.kept, res.k).passed
            elif algo == "parter-vft":
                ok = verify_vft(g, res.kept, args.f, args.k).passed
            else:
                ok = verify_cft(g, res.kept, args.f, args.k).passed
            failures += not ok
            st = spanner_stats(g, res.kept, args.k, args.f)
            rows.append((algo, seed, g.n, g.m, res.size, st["size_over_f_n_pow"], ok))
    head = f"{'algo':<12} {'seed':>6} {'n':>4} {'m':>5} {'size':>5} {'|H|/(f n^(1+1/k))':>18} ok\n"
    body = "".join(f"{a:<12} {s:>6} {n:>4} {m:>5} {z:>5} {r:>18.4f} {'yes' if ok else 'NO'}\n"
                   for a, s, n, m, z, r, ok in rows)
    _emit(head + body, args.out)
    return 1 if failures else 0


# --------------------------------------------------------------- parser

def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cftspan",
                                 description="Color fault-tolerant spanners: build, verify, "
                                             "simulate.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def graph_shape(p, with_seed=True):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int)
        p.add_argument("--density", type=float)
        p.add_argument("--colors", type=int, default=4)
        p.add_argument("--coloring", choices=("uniform", "legal", "monochromatic-biased"),
                       default="uniform")
        p.add_argument("--simple", action="store_true")
        if with_seed:
            p.add_argument("--seed", type=int)

    p = sub.add_parser("gen", help="generate a random colored graph")
    p.add_argument("--mode", choices=(ECFT, VCFT), default=ECFT)
    graph_shape(p)
    p.add_argument("--weights", type=float, nargs=2, default=(1.0, 10.0), metavar=("LO", "HI"))
    p.add_argument("--integer-weights", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("span", help="build a spanner")
    p.add_argument("graph")
    p.add_argument("--algo", choices=ALGOS, default="ecft")
    _add_config(p)
    p.add_argument("--out", help="spanner file (default: stdout)")
    p.add_argument("--report", help="write the JSON run report here")
    p.set_defaults(func=cmd_span)

    p = sub.add_parser("verify", help="check the stretch of a spanner under faults")
    p.add_argument("graph")
    p.add_argument("spanner")
    p.add_argument("--kind", choices=("cft", "vft", "plain"), default="cft")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--exact", action="store_true", help="enumerate every fault set (default)")
    grp.add_argument("--sample", type=int, metavar="N", help="check N random fault sets")
    p.add_argument("--k", type=int, help="override the k of the spanner file")
    p.add_argument("--f", type=int, help="override the f of the spanner file")
    p.add_argument("--all-pairs", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sim", help="run a construction as a synchronous distributed algorithm")
    p.add_argument("graph")
    p.add_argument("--variant", choices=VARIANTS, default="ecft")
    p.add_argument("--model", choices=("local", "congest"), default="local")
    p.add_argument("--word-budget", type=float, default=64)
    _add_config(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("game", help="play the online fault-tolerance game")
    p.add_argument("--alice", choices=("optimal", "park"), default="park")
    p.add_argument("--bob", choices=("forcing", "file"), default="forcing")
    p.add_argument("--sets", help="set stream for --bob file")
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--trace")
    p.add_argument("--out")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("bench", help="sweep seeds and tabulate spanner sizes")
    p.add_argument("--graph-mode", choices=(ECFT, VCFT), default=ECFT)
    graph_shape(p, with_seed=False)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--algos", default="ecft,greedy")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--mode", choices=("paper", "practical"), default="practical")
    p.add_argument("--voting", choices=("exact", "sampled"), default="exact")
    p.add_argument("--symmetry", choices=("sequential", "distributed"), default="sequential")
    p.add_argument("--seed", type=int, help="first seed of the sweep (default 0)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench, d_const=None, rho_const=None, audit=False)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (LemmaViolation, SimulationFault) as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return 3
    except (UsageError, GraphFormatError, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
