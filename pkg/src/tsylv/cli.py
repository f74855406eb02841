"""Command-line entry point: ``python -m tsylv <command>``.

Exit codes: 0 success, 1 input/output or parse error, 2 singular operator,
3 eigenvalue iteration failed to converge, 4 a verification check failed.
"""
import argparse
import os
import sys
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import bench
from .errors import ConvergenceError, SingularOperatorError
from .io import ProblemFileError, read_problem, write_problem, write_solution
from .problems import ARITHMETICS, STRATEGIES, SolverConfig, SolveReport

EXIT_IO = 1
EXIT_SINGULAR = 2
EXIT_CONVERGENCE = 3
EXIT_VERIFY = 4


def _int_list(text):
    """``"8,16,24"`` or an inclusive range ``"2:40"`` / ``"2:40:2"``."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


def _str_list(choices):
    def parse(text):
        items = [s for s in text.split(",") if s]
        for s in items:
            if s not in choices:
                raise argparse.ArgumentTypeError(f"unknown choice {s!r}")
        return items
    return parse


def _dims(args):
    if args.dims:
        return tuple(args.dims)
    if args.n is None:
        raise SystemExit("either --n or --dims is required")
    return (args.n,) * args.d


def _add_problem_shape(p, n_list=False):
    p.add_argument("--family", choices=("laplace", "gsylv"), default="laplace")
    p.add_argument("--d", type=int, default=3, help="tensor order")
    if n_list:
        p.add_argument("--n", type=_int_list, required=True,
                       help="sizes, e.g. 8,16,24 or 8:32:8")
    else:
        p.add_argument("--n", type=int, help="size of every mode")
        p.add_argument("--dims", type=_int_list, help="per-mode sizes, e.g. 4,5,6")
    p.add_argument("--seed", type=int, default=0)


def cmd_solve(args):
    problem = read_problem(args.problem)
    config = SolverConfig(n_min=args.nmin, strategy=args.strategy,
                          arithmetic=args.arithmetic, singularity_tol=args.tol)
    report = bench.solve_problem(problem, config)
    if args.out:
        write_solution(args.out, problem, report)
    print(f"strategy   {report.strategy} (n_min={report.n_min}, {report.arithmetic})")
    print(f"residual   {report.residual:.3e}")
    print(f"discarded  {report.discarded_imag:.3e}")
    for phase, t in report.timings.items():
        print(f"{phase:<15}{t:.6f} s")
    return 0


def cmd_generate(args):
    dims = _dims(args)
    make = bench.well_conditioned_problem if args.well_conditioned else bench.random_problem
    write_problem(args.out, make(args.family, dims, args.seed))
    return 0


def _emit(rows, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            bench.rows_to_csv(rows, fh)
    else:
        sys.stdout.write(bench.rows_to_csv(rows))


def cmd_bench_nmin(args):
    dims = _dims(args)
    rows = bench.bench_nmin(args.family, len(dims), dims[0], args.nmin,
                            strategies=args.strategy, seed=args.seed,
                            reps=args.reps, dims=dims, mem_cap=args.mem_cap_bytes)
    _emit(rows, args.out)
    return 0


def cmd_bench_scaling(args):
    rows = bench.bench_scaling(args.family, args.d, args.n, strategies=args.strategy,
                               seed=args.seed, reps=args.reps,
                               mem_cap=args.mem_cap_bytes, n_min=args.nmin)
    _emit(rows, args.out)
    return 0


def cmd_verify(args):
    cases = bench.verify(seed=args.seed, count=args.count, tol=args.tol)
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    worst = {}
    for i, case in enumerate(cases):
        for name, err in case.errors.items():
            prev = worst.get(name, (0.0, None, 0.0))
            worst[name] = (max(prev[0], err), case if err >= prev[0] else prev[1],
                           max(prev[2], case.residuals[name]))
            if out:
                problem = bench.well_conditioned_problem(case.family, case.dims, case.seed)
                report = SolveReport(solution=case.solutions[name],
                                     residual=case.residuals[name],
                                     strategy=name, n_min=2,
                                     arithmetic="complex_triangular")
                write_solution(out / f"{case.family}_{i:03d}_{name}.json",
                               problem, report, timings=False)
    ok = True
    for name, (err, case, res) in worst.items():
        flag = "ok" if err <= args.tol else "FAIL"
        ok &= err <= args.tol
        print(f"{name:<12} worst rel. error {err:.2e} (dims {case.dims}), "
              f"worst residual {res:.2e}  {flag}")
    print(f"{len(cases)} instances, {'all passed' if ok else 'FAILED'}")
    return 0 if ok else EXIT_VERIFY


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tsylv", description="Recursive solvers for Kronecker-structured tensor equations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a JSON problem file")
    p.add_argument("problem")
    p.add_argument("--out", help="solution file to write")
    p.add_argument("--nmin", type=int)
    p.add_argument("--strategy", choices=STRATEGIES, default="merge")
    p.add_argument("--arithmetic", choices=ARITHMETICS, default="complex_triangular")
    p.add_argument("--tol", type=float, help="singularity tolerance")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="write a seeded random problem file")
    _add_problem_shape(p)
    p.add_argument("--well-conditioned", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench-nmin", help="time the solver over a range of cutoffs")
    _add_problem_shape(p)
    p.add_argument("--nmin", type=_int_list, default=_int_list("2:40"))
    p.add_argument("--strategy", type=_str_list(STRATEGIES), default=list(STRATEGIES))
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--mem-cap-bytes", type=int, default=bench.DEFAULT_MEM_CAP)
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_bench_nmin)

    p = sub.add_parser("bench-scaling", help="compare strategies over a size grid")
    _add_problem_shape(p, n_list=True)
    p.add_argument("--nmin", type=int, help="cutoff (default: per strategy)")
    p.add_argument("--strategy", type=_str_list(STRATEGIES + ("sylvester",)),
                   default=list(STRATEGIES) + ["sylvester"])
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--mem-cap-bytes", type=int, default=bench.DEFAULT_MEM_CAP)
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_bench_scaling)

    p = sub.add_parser("verify", help="cross-check all solvers against the dense oracle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=8, help="instances per family")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", help="directory for solution files")
    p.set_defaults(func=cmd_verify)
    return parser


def _threads():
    raw = os.environ.get("TSYLV_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return max(n, 1)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "reps", 1) < 1:
        print("error: --reps must be at least 1", file=sys.stderr)
        return EXIT_IO
    try:
        with threadpool_limits(limits=_threads()):
            return args.func(args)
    except (OSError, ProblemFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SingularOperatorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
