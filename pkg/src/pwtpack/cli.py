"""Command-line entry points.

Exit codes: 0 success, 1 I/O or data error, 2 usage error (illegal flag
combination, oracle refusal).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .errors import ConfigurationError, OracleCapError, PWTError, ValidationError
from .experiment import load_config, run_experiment, write_results
from .gen import KINDS, generate_instance
from .hyper import CHANCE_VARIANTS, VARIANTS, HHConfig, run_hh
from .model import build_context, format_instance, load_instance, load_tour, nn_tour
from .objective import BOUNDS, PackingPlan, StochasticSpec, surrogate_weight
from .pack import KERNELS, make_report, pack_iterative, pack_static, pack_surrogate
from .rewards import ITERATIVE_REWARDS, REWARDS, STATIC_REWARDS
from .validate import brute_force_optimal, monte_carlo_violation


class UsageError(Exception):
    """Raised for flag combinations argparse cannot express."""


def _add_tour_flags(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--tour", help="tour file (plain city list or TOUR_SECTION)")
    g.add_argument("--tour-seed", type=int, help="build a nearest-neighbour + 2-opt tour with this seed")


def _add_chance_flags(p):
    p.add_argument("--chance", action="store_true", help="use the chance-constrained model")
    p.add_argument("--alpha", type=float, help="confidence level, e.g. 0.9 or 0.999")
    p.add_argument("--delta", type=float, help="weight noise half-width (default 20)")
    p.add_argument("--bound", choices=BOUNDS, help="surrogate bound (default auto)")


def _spec_from(args):
    flags = [f for f in ("alpha", "delta", "bound") if getattr(args, f) is not None]
    if not args.chance:
        if flags:
            raise UsageError(f"--{flags[0]} requires --chance")
        return None
    if args.alpha is None:
        raise UsageError("--chance requires --alpha")
    delta = 20.0 if args.delta is None else args.delta
    try:
        return StochasticSpec(delta, args.alpha, args.bound or "auto")
    except ValidationError as exc:
        raise UsageError(str(exc)) from None


def _context(args):
    inst = load_instance(args.instance)
    if getattr(args, "capacity", None) is not None:
        inst = inst.with_capacity(args.capacity)
    if args.tour is not None:
        tour = load_tour(args.tour, inst.n_cities)
    else:
        tour = nn_tour(inst, args.tour_seed)
    return build_context(inst, tour)


def _emit(obj):
    print(json.dumps(obj, indent=2))


def cmd_solve(args) -> int:
    spec = _spec_from(args)
    h = args.heuristic
    if args.gamma is not None and h != "r1":
        raise UsageError("--gamma applies to r1 only")
    gamma = 1.0 if args.gamma is None else args.gamma
    if spec is None and h not in STATIC_REWARDS + ITERATIVE_REWARDS:
        raise UsageError(f"{h} needs --chance")
    if spec is not None and h not in ("r1", "r6", "r7"):
        raise UsageError(f"{h} is not used under chance constraints (r1, r6, r7)")
    ctx = _context(args)
    kw = dict(gamma=gamma, ascending=args.ascending, trace=args.trace, backend=args.backend)
    if spec is not None:
        _, report = pack_surrogate(ctx, h, spec, **kw)
    elif h in STATIC_REWARDS:
        _, report = pack_static(ctx, h, **kw)
    else:
        _, report = pack_iterative(ctx, h, **kw)
    _emit(report.to_dict())
    return 0


def cmd_hh(args) -> int:
    spec = _spec_from(args)
    if args.variant in CHANCE_VARIANTS and spec is None:
        raise UsageError(f"{args.variant} needs --chance --alpha")
    if args.variant not in CHANCE_VARIANTS and spec is not None:
        raise UsageError(f"{args.variant} is deterministic; drop the chance flags")
    cfg = HHConfig(args.variant, args.iters, args.mutation, args.seed, spec, args.max_evals)
    ctx = _context(args)
    _, _, report = run_hh(cfg, ctx, backend=args.backend)
    _emit(report.to_dict())
    return 0


def cmd_experiment(args) -> int:
    cfg = load_config(args.config)
    if args.workers is not None:
        cfg.workers = args.workers
    rows, agg = run_experiment(cfg)
    raw_path, summary = write_results(cfg, rows, agg)
    failed = sum(1 for r in rows if r["error"])
    print(f"{len(rows)} rows -> {raw_path}")
    print(f"{len(agg)} aggregate rows -> {summary}")
    if failed:
        print(f"{failed} rows failed", file=sys.stderr)
        return 1
    return 0


def _read_plan(path, inst) -> PackingPlan:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, list):
        ids = data
    else:
        ids = data.get("selected", data.get("items"))
    if ids is None:
        raise ValidationError("plan JSON needs a 'selected' or 'items' list")
    return PackingPlan.from_ids(inst, [int(i) for i in ids])


def cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    spec = StochasticSpec(args.delta, args.alpha, args.bound)
    plan = _read_plan(args.plan, inst)
    rate, se = monte_carlo_violation(plan, spec, inst.capacity, args.samples, args.seed)
    limit = (1 - args.alpha) + 3 * se
    _emit({
        "items": plan.items,
        "expected_weight": plan.total_weight,
        "surrogate_weight": surrogate_weight(plan, spec),
        "bound": spec.resolved_bound,
        "capacity": inst.capacity,
        "samples": args.samples,
        "violation_rate": rate,
        "stderr": se,
        "limit": limit,
        "verdict": "PASS" if rate <= limit else "FAIL",
    })
    return 0


def cmd_oracle(args) -> int:
    spec = _spec_from(args)
    ctx = _context(args)
    t0 = time.perf_counter()
    plan, z = brute_force_optimal(ctx, spec)
    ms = (time.perf_counter() - t0) * 1000.0
    report = make_report("oracle", "exhaustive", ctx, plan, z, 1 << ctx.instance.n_items, ms, spec=spec)
    _emit(report.to_dict())
    return 0


def cmd_gen_instance(args) -> int:
    inst = generate_instance(args.cities, args.kind, items_per_city=args.items_per_city,
                             capacity_category=args.capacity_category, seed=args.seed)
    text = format_instance(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen_tour(args) -> int:
    inst = load_instance(args.instance)
    tour = nn_tour(inst, args.seed, improve=not args.no_improve)
    text = "\n".join(str(c) for c in tour) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pwtpack", description="Greedy packing for the packing while travelling problem.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    backends = sorted(KERNELS)

    p = sub.add_parser("solve", help="run one greedy packing algorithm")
    p.add_argument("--instance", required=True)
    _add_tour_flags(p)
    p.add_argument("--heuristic", required=True, choices=REWARDS)
    p.add_argument("--gamma", type=float, help="profit/weight exponent for r1")
    _add_chance_flags(p)
    p.add_argument("--ascending", action="store_true", help="scan scores in ascending order")
    p.add_argument("--trace", action="store_true", help="include the step-by-step trace")
    p.add_argument("--backend", choices=backends)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("hh", help="run a hyper-heuristic variant")
    p.add_argument("--instance", required=True)
    _add_tour_flags(p)
    p.add_argument("--variant", required=True, choices=sorted(VARIANTS))
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--mutation", type=float, default=0.1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-evals", type=int)
    _add_chance_flags(p)
    p.add_argument("--backend", choices=backends)
    p.set_defaults(func=cmd_hh)

    p = sub.add_parser("experiment", help="run an experiment grid from a config file")
    p.add_argument("config")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("validate", help="Monte Carlo check of a plan's chance constraint")
    p.add_argument("--plan", required=True, help="JSON with a 'selected' or 'items' id list")
    p.add_argument("--instance", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--bound", choices=BOUNDS, default="auto")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    p.add_argument("--instance", required=True)
    _add_tour_flags(p)
    p.add_argument("--capacity", type=float, help="override the instance capacity")
    _add_chance_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen-instance", help="write a synthetic benchmark-style instance")
    p.add_argument("--cities", type=int, default=51)
    p.add_argument("--kind", choices=sorted(KINDS), default="unc")
    p.add_argument("--items-per-city", type=int, default=1)
    p.add_argument("--capacity-category", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_instance)

    p = sub.add_parser("gen-tour", help="write a nearest-neighbour + 2-opt tour")
    p.add_argument("--instance", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-improve", action="store_true", help="skip 2-opt")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_tour)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigurationError, OracleCapError) as exc:
        print(f"pwtpack {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, PWTError, json.JSONDecodeError) as exc:
        print(f"pwtpack {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
