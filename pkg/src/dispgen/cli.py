"""Command line: ``dispgen generate | verify | bounds | bench``.

Summaries go to standard output as ``key=value`` records. Failures exit
nonzero with one JSON error record on standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from .core import GridPointSet, as_fraction, theoretical_bounds
from .dispersion import (
    DEFAULT_CANDIDATE_BUDGET,
    DEFAULT_CONSTRAINT_BUDGET,
    DEFAULT_MAX_DIM,
    VerifyMode,
    dispersion_lower_bound,
    exact_dispersion,
    verify_condition_s,
    verify_condition_s_prime,
)
from .errors import BudgetExceeded, CertificationError, DomainError
from .index_pairs import DEFAULT_PAIR_BUDGET
from .krestriction import DEFAULT_CONSTRAINT_BUDGET as SOLVER_BUDGET
from .krestriction import RetryCapExceeded
from .pipelines import (
    PipelineOptions,
    PipelineRun,
    random_baseline,
    run_algorithm1,
    run_algorithm2,
)
from .pointfile import FORMATS, format_points, read_points

ALGORITHMS = ("sosnovec", "uv", "random")

EXIT_OK = 0
EXIT_CERT_FAILED = 1
EXIT_ERROR = 2
EXIT_UNCHECKED = 3


def _rational(text):
    try:
        value = as_fraction(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return value


def _int_list(text):
    return [int(v) for v in text.split(",") if v]


def _rational_list(text):
    return [_rational(v) for v in text.split(",") if v]


def _emit(**fields):
    print(" ".join(f"{k}={v}" for k, v in fields.items()))


def _error(exc):
    record = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("budget", "required", "limit", "line"):
        if getattr(exc, attr, None) is not None:
            record[attr] = getattr(exc, attr)
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return EXIT_ERROR


def _verify_mode(args):
    if args.verify_mode == "none":
        return None
    return VerifyMode(args.verify_mode, args.verify_seed, args.samples)


def _run(algorithm, epsilon, d, opts, seed):
    """Dispatch one construction; returns a PipelineRun."""
    if algorithm == "sosnovec":
        return run_algorithm1(epsilon, d, opts)
    if algorithm == "uv":
        return run_algorithm2(epsilon, d, opts)
    points = random_baseline(epsilon, d, seed)
    run = PipelineRun("random", points, points.m, d, d, None, "unchecked", {})
    if opts.verify is not None:
        try:
            ok = verify_condition_s_prime(points.to_grid(), opts.verify, opts.pair_budget)
            run.certificate = "condition-S-prime" if ok else "failed"
        except BudgetExceeded as exc:
            run.details["verify_error"] = str(exc)
    return run


def _options(args, verify):
    return PipelineOptions(
        solver=args.solver,
        seed=args.seed,
        k_override=args.k_override,
        verify=verify,
        budget=args.budget,
        pair_budget=args.pair_budget,
        workers=args.workers,
    )


def cmd_generate(args):
    verify = _verify_mode(args)
    opts = _options(args, verify)
    start = time.perf_counter()
    run = _run(args.algorithm, args.epsilon, args.dim, opts, args.seed)
    seconds = time.perf_counter() - start
    seed = args.seed if args.algorithm == "random" or args.solver == "randomized" else None
    text = format_points(run.points, run.algorithm, seed, args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    _emit(
        algorithm=run.algorithm,
        m=run.m,
        d=run.d,
        d_star=run.d_star,
        n=len(run.points),
        certified=run.certificate,
        seconds=f"{seconds:.3f}",
    )
    if verify is None or run.certificate == "voided":
        return EXIT_OK
    if run.certificate == "failed":
        return EXIT_CERT_FAILED
    if run.certificate == "unchecked":
        return EXIT_UNCHECKED
    return EXIT_OK


def _rescale(points, order):
    """Re-express grid numerators over ``2^order``; must be exact."""
    grid = points.to_grid()
    if order == grid.m:
        return grid
    arr = grid.array.astype(object)
    if order > grid.m:
        arr = arr * (1 << (order - grid.m))
    else:
        step = 1 << (grid.m - order)
        if any(v % step for v in arr.ravel()):
            raise DomainError(f"points are not on the grid of order {order}")
        arr = arr // step
    return GridPointSet(arr.astype("int64"), order, grid.d)


def cmd_verify(args):
    pf = read_points(args.file)
    points = pf.points
    mode = args.mode
    if mode == "exact":
        if pf.fmt != "rational":
            raise DomainError("exact verification requires the rational file format")
        res = exact_dispersion(points, max_dim=args.max_dim, candidate_budget=args.candidates)
        _emit(mode="exact", dispersion=res.volume, witness=res.witness)
        if args.threshold is not None:
            return EXIT_OK if res.volume <= args.threshold else EXIT_CERT_FAILED
        return EXIT_OK
    if mode == "lower-bound":
        res = dispersion_lower_bound(points, VerifyMode("sampled", args.verify_seed, args.samples))
        _emit(mode="lower-bound", samples=args.samples, seed=args.verify_seed,
              dispersion_at_least=res.volume, witness=res.witness)
        if args.threshold is not None:
            return EXIT_OK if res.volume <= args.threshold else EXIT_CERT_FAILED
        return EXIT_OK
    grid = _rescale(points, args.order or points.m)
    if mode == "condition-s":
        ok = verify_condition_s(grid, budget=args.budget, workers=args.workers)
    else:
        vm = VerifyMode(args.sampling, args.verify_seed, args.samples)
        ok = verify_condition_s_prime(grid, vm, budget=args.pair_budget)
    _emit(mode=mode, order=grid.m, d=grid.d, n=len(grid), result="pass" if ok else "fail")
    return EXIT_OK if ok else EXIT_CERT_FAILED


def cmd_bounds(args):
    rep = theoretical_bounds(args.epsilon, args.dim)
    _emit(
        epsilon=rep.epsilon,
        d=rep.d,
        lower=rep.lower_bound,
        uv_upper=rep.uv_upper,
        sparse_grid=rep.sparse_grid,
    )
    print(f"# upper_shape: {rep.thm44_upper_shape}")
    print(f"# sosnovec: {rep.sosnovec_note}")
    print("# lower and uv_upper bound the minimal size; sparse_grid is an explicit construction")
    return EXIT_OK


def cmd_bench(args):
    out = open(args.output, "w", newline="") if args.output != "-" else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["algorithm", "epsilon", "d", "size", "certified", "seconds"])
        verify = _verify_mode(args)
        for eps in args.epsilons:
            for d in args.dims:
                for algo in args.algorithms:
                    opts = _options(args, verify if algo != "random" else None)
                    start = time.perf_counter()
                    try:
                        run = _run(algo, eps, d, opts, args.seed)
                        size, cert = len(run.points), run.certificate
                    except (BudgetExceeded, DomainError, CertificationError,
                            RetryCapExceeded) as exc:
                        size, cert = "", f"error:{type(exc).__name__}"
                    seconds = time.perf_counter() - start
                    writer.writerow([algo, eps, d, size, cert, f"{seconds:.3f}"])
                    out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _add_budgets(p):
    p.add_argument("--budget", type=int, default=SOLVER_BUDGET,
                   help="max constraints for solvers and condition-S checks (default %(default)s)")
    p.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET,
                   help="max index pairs enumerated for condition S' (default %(default)s)")
    p.add_argument("--workers", type=int, default=1,
                   help="threads for verification; never changes results (default 1)")


def _add_construction(p):
    p.add_argument("--solver", choices=("greedy", "randomized"), default="greedy",
                   help="restriction solver (default greedy)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for random algorithm / randomized solver (default 0)")
    p.add_argument("--k-override", type=int, default=None,
                   help="testing knob: replace a_m by a smaller arity; voids certificate")
    p.add_argument("--verify-mode", choices=("default", "exhaustive", "sampled", "none"),
                   default="default",
                   help="certificate check after construction (default: exhaustive, "
                        "none for random)")
    p.add_argument("--samples", type=int, default=1000,
                   help="sample count for sampled verification (default 1000)")
    p.add_argument("--verify-seed", type=int, default=0,
                   help="seed for sampled verification (default 0)")
    _add_budgets(p)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dispgen", description="Deterministic low-dispersion point sets"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="construct a point set and write it to a file")
    g.add_argument("--epsilon", type=_rational, required=True,
                   help="target dispersion, 'a/b' or decimal, read exactly")
    g.add_argument("--dim", type=int, required=True, help="dimension d >= 2")
    g.add_argument("--algorithm", choices=ALGORITHMS, default="uv",
                   help="sosnovec (condition S), uv (condition S'), random (default uv)")
    g.add_argument("--output", default="-", help="output path, '-' for stdout (default -)")
    g.add_argument("--format", choices=FORMATS, default="rational",
                   help="coordinate format (default rational)")
    _add_construction(g)
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a point file")
    v.add_argument("file")
    v.add_argument("--mode", required=True,
                   choices=("exact", "lower-bound", "condition-s", "condition-s-prime"))
    v.add_argument("--order", type=int, default=None,
                   help="grid order for condition checks (default: header m)")
    v.add_argument("--sampling", choices=("exhaustive", "sampled"), default="exhaustive",
                   help="condition-s-prime coverage (default exhaustive)")
    v.add_argument("--samples", type=int, default=1000, help="samples (default 1000)")
    v.add_argument("--verify-seed", type=int, default=0, help="sampling seed (default 0)")
    v.add_argument("--threshold", type=_rational, default=None,
                   help="exit 0 only if the dispersion value is at most this")
    v.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM,
                   help="dimension budget for exact mode (default %(default)s)")
    v.add_argument("--candidates", type=int, default=DEFAULT_CANDIDATE_BUDGET,
                   help="candidate-box budget for exact mode (default %(default)s)")
    _add_budgets(v)
    v.set_defaults(func=cmd_verify, budget=DEFAULT_CONSTRAINT_BUDGET)

    b = sub.add_parser("bounds", help="print known size bounds")
    b.add_argument("--epsilon", type=_rational, required=True)
    b.add_argument("--dim", type=int, required=True)
    b.set_defaults(func=cmd_bounds)

    h = sub.add_parser("bench", help="CSV sweep over epsilons, dimensions and algorithms")
    h.add_argument("--epsilons", type=_rational_list, default=[_rational("1/4")],
                   help="comma-separated epsilons (default 1/4)")
    h.add_argument("--dims", type=_int_list, default=[2, 3], help="comma-separated dims")
    h.add_argument("--algorithms", type=lambda s: s.split(","),
                   default=["sosnovec", "uv"], help="comma-separated algorithms")
    h.add_argument("--output", default="-", help="CSV path, '-' for stdout (default -)")
    _add_construction(h)
    h.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "verify_mode", None) == "default":
        random_gen = args.command == "generate" and args.algorithm == "random"
        args.verify_mode = "none" if random_gen else "exhaustive"
    try:
        return args.func(args)
    except (BudgetExceeded, DomainError, CertificationError, RetryCapExceeded, OSError) as exc:
        return _error(exc)


if __name__ == "__main__":
    sys.exit(main())
