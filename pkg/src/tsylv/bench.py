"""Benchmark harness: random instances, timing sweeps, the reshaped
Sylvester-solver baseline and the seeded verification suite."""
import csv
import io
import time
from dataclasses import asdict, dataclass

import numpy as np

from .gsylv import mrggsylv, recgsylvten, solve_gsylv
from .kernels import kron, qz, schur
from .laplace import merge_pair, mrglap, reclap, solve_laplace
from .oracle import oracle_solve, residual
from .problems import GSylvProblem, LaplaceProblem, SolverConfig, SolveReport, default_nmin
from .sylvester import DEFAULT_BASE_NMIN, solve_gsylv_tri, solve_sylvester_tri
from .tensor import mode_multiply

__all__ = ["CSV_HEADER", "ResultRow", "random_problem", "well_conditioned_problem",
           "solve_problem", "sylvester_baseline", "baseline_bytes", "solver_bytes",
           "bench_nmin", "bench_scaling", "rows_to_csv", "verify",
           "verify_instances", "VerifyCase", "reduced_solutions"]

CSV_HEADER = ["family", "d", "n", "n_min", "strategy", "wall_mean_s",
              "wall_min_s", "residual", "discarded_imag", "status", "seed"]

DEFAULT_MEM_CAP = 1 << 30


@dataclass
class ResultRow:
    family: str
    d: int
    n: str
    n_min: int
    strategy: str
    wall_mean_s: float
    wall_min_s: float
    residual: float
    discarded_imag: float
    status: str
    seed: int


def _dims_label(dims):
    dims = list(dims)
    return str(dims[0]) if len(set(dims)) == 1 else "x".join(map(str, dims))


def random_problem(family, dims, seed):
    """Problem with standard normal coefficients and right-hand side."""
    rng = np.random.default_rng(seed)
    coeffs = [rng.standard_normal((n, n)) for n in dims]
    if family == "laplace":
        return LaplaceProblem(coeffs, rng.standard_normal(dims))
    C = rng.standard_normal((dims[0], dims[0]))
    return GSylvProblem(coeffs, C, rng.standard_normal(dims))


def well_conditioned_problem(family, dims, seed):
    """Random problem whose operator is safely away from singularity.

    Laplace-like: ``A_mu = G/sqrt(n) + 2 I`` puts every eigenvalue in the
    right half plane with real part near 2. Generalized Sylvester:
    ``A_1 = G/sqrt(n) + 3 I``, ``C = I + G/(4 sqrt(n))`` and trailing
    coefficients of spectral radius about one half.
    """
    rng = np.random.default_rng(seed)

    def g(n, scale=1.0):
        return scale * rng.standard_normal((n, n)) / np.sqrt(n)

    if family == "laplace":
        coeffs = [g(n) + 2 * np.eye(n) for n in dims]
        return LaplaceProblem(coeffs, rng.standard_normal(dims))
    n1 = dims[0]
    coeffs = [g(n1) + 3 * np.eye(n1)] + [g(n, 0.5) for n in dims[1:]]
    C = np.eye(n1) + g(n1, 0.25)
    return GSylvProblem(coeffs, C, rng.standard_normal(dims))


def solve_problem(problem, config=None):
    if isinstance(problem, LaplaceProblem):
        return solve_laplace(problem, config)
    return solve_gsylv(problem, config)


def baseline_bytes(problem):
    """Estimated peak memory of :func:`sylvester_baseline` (complex arithmetic)."""
    dims = problem.dims
    N = int(np.prod(dims))
    d = len(dims)
    if problem.family == "laplace":
        left = dims[0] * dims[1]
        right = N // left
        mats = left ** 2 + right ** 2
    else:
        left = dims[0] if d == 3 else dims[0] * dims[1]
        right = N // left
        mats = 2 * left ** 2 + right ** 2
    return 16 * (mats + 4 * N)


def solver_bytes(problem, strategy, n_min):
    """Estimated size of the largest dense block a recursive solve assembles.

    Pure recursion halves the largest mode until every mode is at most
    `n_min` and then assembles the whole remaining block; the merging
    variants never form a coefficient larger than ``n_min**2``.
    """
    if strategy == "merge":
        m = min(n_min * n_min, int(np.prod(problem.dims)))
        return 16 * m * m
    dims = list(problem.dims)
    while max(dims) > n_min:
        mu = int(np.argmax(dims))
        dims[mu] -= dims[mu] // 2
    N = int(np.prod(dims))
    return 16 * N * N


def sylvester_baseline(problem, base_n_min=DEFAULT_BASE_NMIN):
    """Reshape the tensor equation into one matrix equation and solve that.

    After complex Schur (and QZ) reduction, Laplace-like problems become
    ``(I (x) A1 + A2 (x) I) X + X R^T = B`` with ``R`` the Kronecker sum of
    the remaining coefficients; generalized problems become
    ``L1 X + L2 X R^T = B`` with ``R = A_d (x) ... (x) A_3`` (``A_3 (x) A_2``
    for order three).
    """
    t0 = time.perf_counter()
    dims = problem.dims
    d = len(dims)
    B = problem.rhs
    is_real = not (np.iscomplexobj(B) or any(np.iscomplexobj(A) for A in problem.coeffs))
    if problem.family == "laplace":
        left_modes = 2
        facts = [schur(A) for A in problem.coeffs]
        Ts = [f.T for f in facts]
        Us = [f.U for f in facts]
        Vs = Us
    else:
        left_modes = 1 if d == 3 else 2
        pencil = qz(problem.coeffs[0], problem.c_coeff)
        facts = [schur(A) for A in problem.coeffs[1:]]
        Ts = [pencil.S] + [f.T for f in facts]
        Us = [pencil.U] + [f.U for f in facts]
        Vs = [pencil.Z] + [f.U for f in facts]
    Bt = B
    for mu, U in enumerate(Us):
        Bt = mode_multiply(Bt, U.conj().T, mu)
    nl = int(np.prod(dims[:left_modes]))
    Bm = np.reshape(Bt, (nl, -1), order="F")
    t1 = time.perf_counter()

    if problem.family == "laplace":
        L = merge_pair(Ts[0], Ts[1])
        rest = Ts[2:]
        R = rest[0]
        for A in rest[1:]:
            R = merge_pair(R, A)
        Xm = solve_sylvester_tri(L, R, Bm, base_n_min, check=False)
    else:
        if d == 3:
            L1, L2 = Ts[0], pencil.T
            R = kron(Ts[2], Ts[1])
        else:
            L1 = kron(np.eye(dims[1]), Ts[0])
            L2 = kron(Ts[1], pencil.T)
            R = Ts[2]
            for A in Ts[3:]:
                R = kron(A, R)
        Xm = solve_gsylv_tri(L1, L2, R, Bm, base_n_min, check=False)
    t2 = time.perf_counter()

    X = np.reshape(Xm, dims, order="F")
    for mu, V in enumerate(Vs):
        X = mode_multiply(X, V, mu)
    discarded = 0.0
    if is_real:
        discarded = float(np.max(np.abs(X.imag)))
        X = np.asfortranarray(X.real)
    t3 = time.perf_counter()
    timings = {"reduction": t1 - t0, "recursion": t2 - t1,
               "back_transform": t3 - t2, "total": t3 - t0}
    return SolveReport(solution=X, residual=residual(problem, X),
                       discarded_imag=discarded, timings=timings,
                       strategy="sylvester", n_min=base_n_min,
                       arithmetic="complex_triangular")


def _timed(fn, reps):
    walls = []
    report = None
    for _ in range(reps):
        t0 = time.perf_counter()
        report = fn()
        walls.append(time.perf_counter() - t0)
    return report, walls


def _row(problem, strategy, n_min, seed, report, walls, status="ok"):
    return ResultRow(
        family=problem.family, d=len(problem.dims), n=_dims_label(problem.dims),
        n_min=n_min, strategy=strategy,
        wall_mean_s=float(np.mean(walls)) if walls else float("nan"),
        wall_min_s=float(np.min(walls)) if walls else float("nan"),
        residual=report.residual if report else float("nan"),
        discarded_imag=report.discarded_imag if report else float("nan"),
        status=status, seed=seed)


def _run(problem, strategy, n_min, seed, reps, mem_cap):
    if strategy == "sylvester":
        n_min = DEFAULT_BASE_NMIN
        need = baseline_bytes(problem)
        fn = lambda: sylvester_baseline(problem)  # noqa: E731
    else:
        config = SolverConfig(n_min=n_min, strategy=strategy)
        n_min = config.resolve_nmin(problem.family, len(problem.dims))
        need = solver_bytes(problem, strategy, n_min)
        fn = lambda: solve_problem(problem, config)  # noqa: E731
    if need > mem_cap:
        return _row(problem, strategy, n_min, seed, None, [], "oom")
    try:
        report, walls = _timed(fn, reps)
    except MemoryError:
        return _row(problem, strategy, n_min, seed, None, [], "oom")
    return _row(problem, strategy, n_min, seed, report, walls)


def bench_nmin(family, d, n, nmins, strategies=("recursion_only", "merge"),
               seed=0, reps=5, dims=None, mem_cap=DEFAULT_MEM_CAP):
    """Time the full pipeline for every cutoff in `nmins` (one row each)."""
    dims = tuple(dims) if dims else (n,) * d
    problem = random_problem(family, dims, seed)
    rows = []
    for strategy in strategies:
        for n_min in nmins:
            rows.append(_run(problem, strategy, n_min, seed, reps, mem_cap))
    return rows


def bench_scaling(family, d, ns, strategies=("recursion_only", "merge", "sylvester"),
                  seed=0, reps=5, mem_cap=DEFAULT_MEM_CAP, n_min=None):
    """Time each strategy over a grid of sizes; the baseline may report ``oom``."""
    rows = []
    for n in ns:
        problem = random_problem(family, (n,) * d, seed)
        for strategy in strategies:
            nm = n_min
            if nm is None and strategy != "sylvester":
                nm = default_nmin(family, strategy, d)
            rows.append(_run(problem, strategy, nm, seed, reps, mem_cap))
    return rows


def rows_to_csv(rows, fh=None):
    """Write rows with :data:`CSV_HEADER`; returns the text when `fh` is None."""
    out = fh if fh is not None else io.StringIO()
    writer = csv.DictWriter(out, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(asdict(row))
    if fh is None:
        return out.getvalue()
    return None



@dataclass
class VerifyCase:
    family: str
    dims: tuple
    seed: int
    errors: dict
    residuals: dict
    solutions: dict


def reduced_solutions(problem, n_min):
    """Run both recursive algorithms on the reduced problem, back-transformed."""
    dims = problem.dims
    if problem.family == "laplace":
        facts = [schur(A) for A in problem.coeffs]
        Ts = [f.T for f in facts]
        Us = [f.U for f in facts]
        Vs = Us
    else:
        pencil = qz(problem.coeffs[0], problem.c_coeff)
        facts = [schur(A) for A in problem.coeffs[1:]]
        Ts = [pencil.S] + [f.T for f in facts]
        Us = [pencil.U] + [f.U for f in facts]
        Vs = [pencil.Z] + [f.U for f in facts]
    Bt = problem.rhs
    for mu, U in enumerate(Us):
        Bt = mode_multiply(Bt, U.conj().T, mu)

    if problem.family == "laplace":
        runs = {"reclap": lambda: reclap(Ts, Bt, n_min)}
        if len(dims) == 2:
            runs["mrglap"] = lambda: solve_sylvester_tri(Ts[0], Ts[1], Bt, check=False)
        else:
            runs["mrglap"] = lambda: mrglap(Ts, Bt, n_min)
    else:
        runs = {"recgsylvten": lambda: recgsylvten(Ts, pencil.T, Bt, n_min),
                "mrggsylv": lambda: mrggsylv(Ts, pencil.T, Bt, n_min)}
    out = {}
    for name, run in runs.items():
        X = run()
        for mu, V in enumerate(Vs):
            X = mode_multiply(X, V, mu)
        out[name] = np.asfortranarray(X.real)
    return out


def verify_instances(seed, count):
    """Seeded instance list spanning both families and orders 2 to 5."""
    rng = np.random.default_rng(seed)
    cases = []
    for family in ("laplace", "gsylv"):
        for i in range(count):
            d = 2 + i % 4
            while True:
                dims = tuple(int(x) for x in rng.integers(2, 11, size=d))
                if np.prod(dims) <= 1024:
                    break
            cases.append((family, dims, int(rng.integers(0, 2**63 - 1))))
    return cases


def verify(seed=0, count=8, tol=1e-9, n_min=2):
    """Compare every recursive algorithm with the dense oracle on seeded instances.

    Returns the list of :class:`VerifyCase` records; a case passes when all
    relative errors are at most `tol`.
    """
    results = []
    for family, dims, inst_seed in verify_instances(seed, count):
        problem = well_conditioned_problem(family, dims, inst_seed)
        X_ref = oracle_solve(problem)
        ref_norm = np.linalg.norm(X_ref)
        sols = reduced_solutions(problem, n_min)
        errors = {k: float(np.linalg.norm(X - X_ref) / ref_norm) for k, X in sols.items()}
        resid = {k: residual(problem, X) for k, X in sols.items()}
        results.append(VerifyCase(family, dims, inst_seed, errors, resid, sols))
    return results

