"""Command-line front end.

    groundair gen --n 5 --seed 1 --out inst.json
    groundair solve inst.json --out plan.json --svg plan.svg
    groundair baseline inst.json --algo dfs
    groundair bench --sites-range 2:6 --trials 3 --out bench.csv
    groundair plot plan.json --out plan.svg

Exit status: 0 ok, 1 usage or parse error, 2 no feasible plan, 3 capacity guard.
The default iteration budget can be overridden with GROUNDAIR_ITERATIONS.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import bench
from .baselines import brute_force, naive, tsp_dfs
from .fileio import FileFormatError, dump_instance, dump_plan, load_instance, load_plan, parse_plan, save_instance
from .generate import PRESETS, generate
from .mcts import MctsConfig, search
from .model import DEFAULT_LEVELS
from .plot import render_svg
from .tsp import CapacityError, solve_auto

EXIT_OK, EXIT_USAGE, EXIT_NO_PLAN, EXIT_CAPACITY = 0, 1, 2, 3
ITERATIONS_ENV = "GROUNDAIR_ITERATIONS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_iterations() -> int:
    raw = os.environ.get(ITERATIONS_ENV)
    if raw is None:
        return 10_000
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{ITERATIONS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"{ITERATIONS_ENV} must be >= 1")
    return value


def _levels(text: str):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated fractions, got {text!r}") from None


def _range(text: str):
    try:
        lo, _, hi = text.partition(":")
        lo = int(lo)
        hi = int(hi) if hi else lo
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return range(lo, hi + 1)


def _write(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _emit_plan(inst, plan, planner, args) -> None:
    text = dump_plan(inst, plan, planner)
    _write(text, args.out)
    if args.svg:
        _write(render_svg(parse_plan(text)), args.svg)


def _summary(name, plan) -> None:
    print(f"{name}: T_total={plan.total_time:.6f} h  T_Gwait={plan.wait_time:.6f} h  "
          f"feasible={plan.feasible}", file=sys.stderr)


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    iterations = args.iterations if args.iterations is not None else default_iterations()
    config = MctsConfig(iterations=iterations, exploration=args.const, seed=args.seed,
                        time_limit=args.time_limit)
    tour = solve_auto(inst.start, inst.sites, seed=args.seed).order
    trace = None
    if args.trace:
        def trace(row):
            print("trace " + " ".join(f"{k}={v}" for k, v in row.items()), file=sys.stderr)
    res = search(inst, tour, config, trace=trace)
    if res.plan is None:
        print(f"NO_PLAN: no feasible allocation found in {res.stats.iterations} iterations",
              file=sys.stderr)
        return EXIT_NO_PLAN
    planner = {"algo": "mcts", "seed": args.seed, "iterations": iterations,
               "exploration": args.const, "iterations_run": res.stats.iterations,
               "exhausted": res.stats.exhausted}
    if args.timing:
        planner["wall_time"] = res.stats.wall_time
    _emit_plan(inst, res.plan, planner, args)
    _summary("mcts", res.plan)
    return EXIT_OK


def cmd_baseline(args) -> int:
    inst = load_instance(args.instance)
    try:
        if args.algo == "brute":
            res = brute_force(inst)
        elif args.algo == "dfs":
            res = tsp_dfs(inst, guard=not args.no_guard, time_limit=args.time_limit)
        else:
            res = naive(inst)
    except CapacityError as e:
        print(f"capacity: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    if res.plan is None:
        print("NO_PLAN: no feasible plan exists", file=sys.stderr)
        return EXIT_NO_PLAN
    planner = {"algo": args.algo, "complete": res.stats.complete}
    if args.timing:
        planner["wall_time"] = res.stats.wall_time
    _emit_plan(inst, res.plan, planner, args)
    _summary(args.algo, res.plan)
    return EXIT_OK if res.status == "OK" else EXIT_NO_PLAN


def cmd_bench(args) -> int:
    iterations = args.iterations if args.iterations is not None else default_iterations()
    algos = tuple(args.algos.split(",")) if args.algos else bench.ALGOS
    for a in algos:
        if a not in bench.ALGOS:
            raise UsageError(f"unknown algorithm {a!r} (choose from {', '.join(bench.ALGOS)})")

    def progress(n, trial):
        if not args.quiet:
            print(f"bench N={n} trial={trial} done", file=sys.stderr)

    rows = bench.run(args.sites_range, args.trials, args.seed, algos, iterations, args.levels, progress)
    bench.write_csv(rows, None if args.out in (None, "-") else args.out, args.append, sys.stdout)
    return EXIT_OK


def cmd_gen(args) -> int:
    inst = generate(args.n, box=args.box, seed=args.seed, preset=args.params, levels=args.levels)
    if args.out in (None, "-"):
        sys.stdout.write(dump_instance(inst))
    else:
        save_instance(inst, args.out)
    return EXIT_OK


def cmd_plot(args) -> int:
    _write(render_svg(load_plan(args.plan)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="groundair", description="Energy-aware UGV/UAV survey routing.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="TSP tour plus tree search over energy levels")
    s.add_argument("instance")
    s.add_argument("--iterations", type=int, default=None,
                   help=f"search iterations (default 10000 or ${ITERATIONS_ENV})")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--const", type=float, default=1.414, help="UCB exploration constant")
    s.add_argument("--time-limit", type=float, default=None, help="wall-clock budget in seconds")
    s.add_argument("--out", default=None, help="plan file (default stdout)")
    s.add_argument("--svg", default=None, help="also write a route plot")
    s.add_argument("--trace", action="store_true", help="print search progress to stderr")
    s.add_argument("--timing", action="store_true", help="record wall time in the plan file")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("baseline", help="run a comparison planner")
    b.add_argument("instance")
    b.add_argument("--algo", choices=("brute", "dfs", "naive"), required=True)
    b.add_argument("--no-guard", action="store_true", help="lift the DFS size guard")
    b.add_argument("--time-limit", type=float, default=None, help="DFS wall-clock budget in seconds")
    b.add_argument("--out", default=None)
    b.add_argument("--svg", default=None)
    b.add_argument("--timing", action="store_true")
    b.set_defaults(func=cmd_baseline)

    c = sub.add_parser("bench", help="compare planners on seeded random instances")
    c.add_argument("--sites-range", type=_range, default=range(2, 7), metavar="LO:HI")
    c.add_argument("--trials", type=int, default=5)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--iterations", type=int, default=None)
    c.add_argument("--levels", type=_levels, default=DEFAULT_LEVELS)
    c.add_argument("--algos", default=None, help="comma-separated subset of brute,dfs,mcts,naive")
    c.add_argument("--out", default=None, help="CSV path (default stdout)")
    c.add_argument("--append", action="store_true", help="merge into an existing CSV")
    c.add_argument("--quiet", action="store_true")
    c.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="write a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--box", type=float, default=None, help="square side in km (default scales with n)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--params", choices=sorted(PRESETS), default="desk")
    g.add_argument("--levels", type=_levels, default=DEFAULT_LEVELS)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    pl = sub.add_parser("plot", help="render a plan file as SVG")
    pl.add_argument("plan")
    pl.add_argument("--out", default=None)
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileFormatError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as e:
        print(f"capacity: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
