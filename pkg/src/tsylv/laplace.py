"""Solver for Laplace-like tensor equations ``sum_mu X x_mu A_mu = B``.

The coefficients are reduced to (quasi-)triangular Schur form, the reduced
equation is solved either by pure recursion on the largest mode
(:func:`reclap`) or by recursion combined with merging the first two modes
(:func:`mrglap`), and the result is transformed back.
"""
import time
from dataclasses import dataclass

import numpy as np

from .errors import SingularOperatorError
from .kernels import (diagonal_eigenvalues, kron, schur, solve_kron_structured,
                      unit_roundoff)
from .oracle import residual
from .problems import LaplaceProblem, SolverConfig, SolveReport
from .sylvester import DEFAULT_BASE_NMIN, solve_sylvester_tri, split_point
from .tensor import (merge_modes, mode_concat, mode_multiply, mode_split,
                     unmerge_modes)

__all__ = ["Solvability", "check_solvable_laplace", "solve_laplace", "reclap",
           "mrglap", "merge_pair", "assemble_reduced_laplace"]


@dataclass(frozen=True)
class Solvability:
    """Outcome of a solvability scan.

    `min_abs` is the smallest magnitude found, attained at the diagonal
    positions `indices`; `witness` holds the corresponding eigenvalues.
    """
    ok: bool
    min_abs: float
    witness: tuple
    indices: tuple

    def raise_if_singular(self):
        if not self.ok:
            raise SingularOperatorError(
                f"operator is singular: eigenvalue combination {self.witness} "
                f"has magnitude {self.min_abs:.3e}",
                witness=self.witness, indices=self.indices)


def check_solvable_laplace(coeffs, tol):
    """Scan every eigenvalue tuple of the reduced coefficients for a vanishing sum.

    The sum over the leading modes is formed once; the last mode is swept
    in a loop, so memory stays at ``prod(n_1..n_{d-1})``.
    """
    lams = [diagonal_eigenvalues(A) for A in coeffs]
    head = np.zeros(1, dtype=complex)
    for lam in lams[:-1]:
        head = np.add.outer(head, lam).ravel(order="C")
    # C-order ravel of the outer sums: last leading mode varies fastest
    best = (np.inf, 0, 0)
    for j, lam in enumerate(lams[-1]):
        vals = np.abs(head + lam)
        i = int(np.argmin(vals))
        if vals[i] < best[0]:
            best = (float(vals[i]), i, j)
    min_abs, i, j = best
    lead_dims = [len(lam) for lam in lams[:-1]]
    idx = tuple(int(t) for t in np.unravel_index(i, lead_dims)) + (j,)
    witness = tuple(lam[t] for lam, t in zip(lams, idx))
    return Solvability(ok=min_abs >= tol, min_abs=min_abs, witness=witness,
                       indices=idx)


def merge_pair(A1, A2):
    """Return ``I_{n2} (x) A1 + A2 (x) I_{n1}``, built without temporaries."""
    A1 = np.asarray(A1)
    A2 = np.asarray(A2)
    n1, n2 = A1.shape[0], A2.shape[0]
    M = np.zeros((n1 * n2, n1 * n2), dtype=np.result_type(A1, A2))
    M4 = M.reshape(n2, n1, n2, n1)
    for p in range(n2):
        M4[p, :, p, :] = A1
    for i in range(n1):
        M4[:, i, :, i] += A2
    return M


def assemble_reduced_laplace(coeffs):
    """Kronecker-sum matrix of a (small) block, first mode innermost."""
    dims = [A.shape[0] for A in coeffs]
    N = int(np.prod(dims))
    M = np.zeros((N, N), dtype=np.result_type(*coeffs))
    before = 1
    for A, n in zip(coeffs, dims):
        after = N // (before * n)
        M += kron(np.eye(after), kron(A, np.eye(before)))
        before *= n
    return M


def _base_solve(coeffs, B):
    M = assemble_reduced_laplace(coeffs)
    x = solve_kron_structured(M, np.ravel(B, order="F"), coeffs)
    return np.reshape(x, B.shape, order="F")


def _split(coeffs, B):
    mu = int(np.argmax(B.shape))
    return mu, split_point(coeffs[mu])


def _with(coeffs, mu, A):
    out = list(coeffs)
    out[mu] = A
    return out


def reclap(coeffs, B, n_min):
    """Recursive solve of the reduced equation; splits the largest mode in half.

    The block ``X_2`` (trailing half) is solved first, its coupling is
    subtracted from the leading half of the right-hand side, then ``X_1``
    is solved from that updated right-hand side.
    """
    if max(B.shape) <= n_min:
        return _base_solve(coeffs, B)
    mu, k = _split(coeffs, B)
    if k is None:
        return _base_solve(coeffs, B)
    A = coeffs[mu]
    B1, B2 = mode_split(B, mu, k)
    X2 = reclap(_with(coeffs, mu, A[k:, k:]), B2, n_min)
    B1 = B1 - mode_multiply(X2, A[:k, k:], mu)
    X1 = reclap(_with(coeffs, mu, A[:k, :k]), B1, n_min)
    return np.asfortranarray(mode_concat(X1, X2, mu))


def mrglap(coeffs, B, n_min, base_n_min=DEFAULT_BASE_NMIN):
    """Recursive solve with dimension merging for triangular coefficients.

    Once ``n_1 * n_2 <= n_min**2`` the first two modes are fused through
    :func:`merge_pair`, lowering the order by one; an order-three problem
    thereby becomes a triangular Sylvester equation.
    """
    d = B.ndim
    if d == 2:
        return solve_sylvester_tri(coeffs[0], coeffs[1], B, base_n_min, check=False)
    n1, n2 = B.shape[:2]
    if n1 * n2 <= n_min * n_min:
        A1m = merge_pair(coeffs[0], coeffs[1])
        Bm = merge_modes(B, 0)
        if d == 3:
            Xm = solve_sylvester_tri(A1m, coeffs[2], Bm, base_n_min, check=False)
        else:
            Xm = mrglap([A1m] + list(coeffs[2:]), Bm, n_min, base_n_min)
        return unmerge_modes(Xm, 0, n1, n2)
    mu, k = _split(coeffs, B)
    if k is None:
        return _base_solve(coeffs, B)
    A = coeffs[mu]
    B1, B2 = mode_split(B, mu, k)
    X2 = mrglap(_with(coeffs, mu, A[k:, k:]), B2, n_min, base_n_min)
    B1 = B1 - mode_multiply(X2, A[:k, k:], mu)
    X1 = mrglap(_with(coeffs, mu, A[:k, :k]), B1, n_min, base_n_min)
    return np.asfortranarray(mode_concat(X1, X2, mu))


def solve_laplace(problem, config=None):
    """Solve a :class:`LaplaceProblem` end to end.

    Parameters
    ----------
    problem : LaplaceProblem
    config : SolverConfig, optional

    Returns
    -------
    SolveReport
        The solution, its residual against the original equation, the
        largest imaginary part dropped (real data solved in complex
        arithmetic) and per-phase wall times.

    Raises
    ------
    SingularOperatorError
        If some sum of eigenvalues, one per coefficient, is below the
        singularity tolerance.
    ConvergenceError
        If a Schur decomposition fails.
    """
    config = config or SolverConfig()
    coeffs = problem.coeffs
    B = problem.rhs
    d = B.ndim
    is_real = not (np.iscomplexobj(B) or any(np.iscomplexobj(A) for A in coeffs))
    real_path = config.arithmetic == "real_quasitriangular"
    if real_path and not is_real:
        raise ValueError("real_quasitriangular arithmetic needs real data")
    n_min = config.resolve_nmin("laplace", d)
    timings = {}

    t0 = time.perf_counter()
    kind = "real" if real_path else "complex"
    facts = [schur(A, kind) for A in coeffs]
    tol = config.singularity_tol
    if tol is None:
        tol = unit_roundoff() * sum(np.linalg.norm(A) for A in coeffs)
    check_solvable_laplace([f.T for f in facts], tol).raise_if_singular()
    Bt = B
    for mu, f in enumerate(facts):
        Bt = mode_multiply(Bt, f.U.conj().T, mu)
    t1 = time.perf_counter()
    timings["reduction"] = t1 - t0

    Ts = [f.T for f in facts]
    if config.strategy == "merge":
        if d == 2:
            Xt = solve_sylvester_tri(Ts[0], Ts[1], Bt, n_min, check=False)
        else:
            Xt = mrglap(Ts, Bt, n_min, config.base_n_min)
    else:
        Xt = reclap(Ts, Bt, n_min)
    t2 = time.perf_counter()
    timings["recursion"] = t2 - t1

    X = Xt
    for mu, f in enumerate(facts):
        X = mode_multiply(X, f.U, mu)
    discarded = 0.0
    if is_real and np.iscomplexobj(X):
        discarded = float(np.max(np.abs(X.imag))) if X.size else 0.0
        X = np.asfortranarray(X.real)
    t3 = time.perf_counter()
    timings["back_transform"] = t3 - t2
    timings["total"] = t3 - t0

    return SolveReport(solution=X, residual=residual(problem, X),
                       discarded_imag=discarded, timings=timings,
                       strategy=config.strategy, n_min=n_min,
                       arithmetic=config.arithmetic)
