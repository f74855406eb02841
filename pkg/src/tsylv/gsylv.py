"""Solver for generalized Sylvester tensor equations with Kronecker structure,

    X x_1 A_1 + X x_1 C x_2 A_2 x_3 ... x_d A_d = B.

The pencil ``(A_1, C)`` is reduced by QZ and the remaining coefficients by
Schur decompositions. The reduced equation is solved by recursion
(:func:`recgsylvten`) or by recursion plus merging of the two trailing
modes (:func:`mrggsylv`).
"""
import time

import numpy as np

from .kernels import (diagonal_eigenvalues, kron, pencil_eigenpairs, qz, schur,
                      solve_kron_structured, unit_roundoff)
from .laplace import Solvability
from .oracle import residual
from .problems import GSylvProblem, SolverConfig, SolveReport
from .sylvester import DEFAULT_BASE_NMIN, solve_gsylv_tri, split_point
from .tensor import (merge_modes, mode_concat, mode_multiply, mode_split,
                     unmerge_modes)

__all__ = ["shifted_kron_problem", "check_solvable_gsylv", "solve_gsylv",
           "recgsylvten", "mrggsylv", "assemble_reduced_gsylv"]


def shifted_kron_problem(coeffs, C, lam, B):
    """Problem with ``A_1 = -lam * I``, i.e. operator ``A_d (x) ... (x) A_2 (x) C - lam I``.

    `coeffs` holds ``A_2, ..., A_d``.
    """
    C = np.asarray(C)
    n1 = C.shape[0]
    dtype = np.result_type(C, np.asarray(lam), np.float64)
    A1 = -lam * np.eye(n1, dtype=dtype)
    return GSylvProblem(coeffs=[A1] + list(coeffs), c_coeff=C, rhs=B)


def check_solvable_gsylv(A1, C, coeffs, tol):
    """Scan ``|alpha_i + beta_i * prod_mu lambda_mu|`` over all index tuples.

    ``(alpha_i, beta_i)`` are the eigenvalue pairs of the reduced pencil
    ``(A1, C)`` and ``lambda_mu`` the eigenvalues of the reduced trailing
    coefficients `coeffs`. A pair with ``alpha_i = beta_i = 0`` (singular
    pencil) makes every tuple vanish and is reported as such.
    """
    alpha, beta = pencil_eigenpairs(A1, C)
    prod = np.ones(1, dtype=complex)
    for A in coeffs:
        prod = np.multiply.outer(prod, diagonal_eigenvalues(A)).ravel(order="C")
    best = (np.inf, 0, 0)
    for i in range(len(alpha)):
        vals = np.abs(alpha[i] + beta[i] * prod)
        j = int(np.argmin(vals))
        if vals[j] < best[0]:
            best = (float(vals[j]), i, j)
    min_abs, i, j = best
    trail_dims = [A.shape[0] for A in coeffs]
    idx = (i,) + tuple(int(t) for t in np.unravel_index(j, trail_dims))
    lams = [diagonal_eigenvalues(A)[t] for A, t in zip(coeffs, idx[1:])]
    witness = (alpha[i], beta[i]) + tuple(lams)
    return Solvability(ok=min_abs >= tol, min_abs=min_abs, witness=witness,
                       indices=idx)


def assemble_reduced_gsylv(coeffs, C):
    """``I (x) A_1 + A_d (x) ... (x) A_2 (x) C`` for a (small) block."""
    N = int(np.prod([A.shape[0] for A in coeffs]))
    K = C
    for A in coeffs[1:]:
        K = kron(A, K)
    return kron(np.eye(N // coeffs[0].shape[0]), coeffs[0]) + K


def _base_solve(coeffs, C, B):
    M = assemble_reduced_gsylv(coeffs, C)
    x = solve_kron_structured(M, np.ravel(B, order="F"), coeffs)
    return np.reshape(x, B.shape, order="F")


def _coupling(X, C, coeffs, mu=None, block=None):
    # X x_1 C x_2 A_2 ... x_d A_d, with `block` replacing A_mu when given
    Y = mode_multiply(X, C, 0)
    for nu in range(1, len(coeffs)):
        Y = mode_multiply(Y, block if nu == mu else coeffs[nu], nu)
    return Y


def _split_step(coeffs, C, B, solve):
    """One decoupling step along the largest mode; `solve` handles the halves."""
    mu = int(np.argmax(B.shape))
    A = coeffs[mu]
    k = split_point(A)
    if k is None:
        return None
    B1, B2 = mode_split(B, mu, k)
    if mu == 0:
        lo = [A[:k, :k]] + list(coeffs[1:])
        hi = [A[k:, k:]] + list(coeffs[1:])
        X2 = solve(hi, C[k:, k:], B2)
        B1 = (B1 - mode_multiply(X2, A[:k, k:], 0)
              - _coupling(X2, C[:k, k:], coeffs))
        X1 = solve(lo, C[:k, :k], B1)
    else:
        lo = list(coeffs)
        hi = list(coeffs)
        lo[mu] = A[:k, :k]
        hi[mu] = A[k:, k:]
        X2 = solve(hi, C, B2)
        B1 = B1 - _coupling(X2, C, coeffs, mu, A[:k, k:])
        X1 = solve(lo, C, B1)
    return np.asfortranarray(mode_concat(X1, X2, mu))


def recgsylvten(coeffs, C, B, n_min):
    """Recursive solve of the reduced equation.

    Splitting the first mode partitions both ``A_1`` and ``C``; splitting any
    other mode leaves ``A_1`` alone and couples the halves only through the
    ``C``-term.
    """
    if max(B.shape) <= n_min:
        return _base_solve(coeffs, C, B)

    def solve(cs, c, rhs):
        return recgsylvten(cs, c, rhs, n_min)

    X = _split_step(coeffs, C, B, solve)
    return _base_solve(coeffs, C, B) if X is None else X


def mrggsylv(coeffs, C, B, n_min, base_n_min=DEFAULT_BASE_NMIN):
    """Recursive solve with merging of the two trailing modes.

    When ``n_{d-1} * n_d <= n_min**2`` the coefficient ``A_d (x) A_{d-1}``
    replaces both modes. The first mode is never merged since ``C`` acts on
    it alone.
    """
    d = B.ndim
    if d == 2:
        return solve_gsylv_tri(coeffs[0], C, coeffs[1], B, base_n_min, check=False)
    na, nb = B.shape[-2:]
    if na * nb <= n_min * n_min:
        Am = kron(coeffs[-1], coeffs[-2])
        Bm = merge_modes(B, d - 2)
        if d == 3:
            Xm = solve_gsylv_tri(coeffs[0], C, Am, Bm, base_n_min, check=False)
        else:
            Xm = mrggsylv(list(coeffs[:-2]) + [Am], C, Bm, n_min, base_n_min)
        return unmerge_modes(Xm, d - 2, na, nb)

    def solve(cs, c, rhs):
        return mrggsylv(cs, c, rhs, n_min, base_n_min)

    X = _split_step(coeffs, C, B, solve)
    return _base_solve(coeffs, C, B) if X is None else X


def solve_gsylv(problem, config=None):
    """Solve a :class:`GSylvProblem` end to end.

    The solution is recovered as ``X~ x_1 Z x_2 U_2 ... x_d U_d`` where `Z`
    is the right QZ factor of ``(A_1, C)``.

    Returns
    -------
    SolveReport
    """
    config = config or SolverConfig()
    coeffs = problem.coeffs
    C = problem.c_coeff
    B = problem.rhs
    d = B.ndim
    is_real = not (np.iscomplexobj(B) or np.iscomplexobj(C)
                   or any(np.iscomplexobj(A) for A in coeffs))
    real_path = config.arithmetic == "real_quasitriangular"
    if real_path and not is_real:
        raise ValueError("real_quasitriangular arithmetic needs real data")
    n_min = config.resolve_nmin("gsylv", d)
    kind = "real" if real_path else "complex"
    timings = {}

    t0 = time.perf_counter()
    pencil = qz(coeffs[0], C, kind)
    facts = [schur(A, kind) for A in coeffs[1:]]
    tol = config.singularity_tol
    if tol is None:
        norms = [np.linalg.norm(A) for A in coeffs]
        tol = unit_roundoff() * (norms[0] + np.linalg.norm(C) * np.prod(norms[1:]))
    check_solvable_gsylv(pencil.S, pencil.T, [f.T for f in facts],
                         tol).raise_if_singular()
    Bt = mode_multiply(B, pencil.U.conj().T, 0)
    for mu, f in enumerate(facts, start=1):
        Bt = mode_multiply(Bt, f.U.conj().T, mu)
    t1 = time.perf_counter()
    timings["reduction"] = t1 - t0

    Ts = [pencil.S] + [f.T for f in facts]
    if config.strategy == "merge":
        Xt = mrggsylv(Ts, pencil.T, Bt, n_min, config.base_n_min)
    else:
        Xt = recgsylvten(Ts, pencil.T, Bt, n_min)
    t2 = time.perf_counter()
    timings["recursion"] = t2 - t1

    X = mode_multiply(Xt, pencil.Z, 0)
    for mu, f in enumerate(facts, start=1):
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
