"""Brute-force reference: explicitly assembled operators, dense LU solves and
residuals computed from mode products.

Nothing here goes through the recursive solvers; the assembled matrices use
:func:`numpy.kron` directly rather than the package's own Kronecker kernel.
"""
import warnings

import numpy as np
import scipy.linalg as sla

from .errors import OracleSizeError, SingularOperatorError
from .problems import GSylvProblem, LaplaceProblem
from .tensor import from_vector, mode_multiply, vectorize

__all__ = ["DEFAULT_CAP", "assemble_laplace_matrix", "assemble_gsylv_matrix",
           "dense_solve", "laplace_apply", "gsylv_apply", "residual",
           "oracle_solve"]

DEFAULT_CAP = 4096


def _total_size(coeffs, cap):
    N = int(np.prod([A.shape[0] for A in coeffs], dtype=np.int64))
    if N > cap:
        raise OracleSizeError(f"assembled operator of size {N} exceeds cap {cap}")
    return N


def assemble_laplace_matrix(coeffs, cap=DEFAULT_CAP):
    """``sum_mu I (x) ... (x) A_mu (x) ... (x) I`` with ``A_1`` innermost."""
    coeffs = [np.asarray(A) for A in coeffs]
    N = _total_size(coeffs, cap)
    dtype = np.result_type(*coeffs, np.float64)
    M = np.zeros((N, N), dtype=dtype)
    for mu, A in enumerate(coeffs):
        term = np.ones((1, 1))
        for nu in reversed(range(len(coeffs))):
            factor = A if nu == mu else np.eye(coeffs[nu].shape[0])
            term = np.kron(term, factor)
        M += term
    return M


def assemble_gsylv_matrix(coeffs, C, cap=DEFAULT_CAP):
    """``I (x) ... (x) I (x) A_1 + A_d (x) ... (x) A_2 (x) C``."""
    coeffs = [np.asarray(A) for A in coeffs]
    C = np.asarray(C)
    N = _total_size(coeffs, cap)
    term = np.ones((1, 1))
    for A in reversed(coeffs[1:]):
        term = np.kron(term, A)
    term = np.kron(term, C)
    lead = np.kron(np.eye(N // coeffs[0].shape[0]), coeffs[0])
    return lead + term


def dense_solve(A, b):
    """LU with partial pivoting; raises on an exactly or numerically zero pivot."""
    A = np.asarray(A)
    b = np.asarray(b)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as an error
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=True)
    u = np.finfo(lu.dtype).eps / 2
    d = np.abs(np.diagonal(lu))
    small = np.flatnonzero(d <= u * np.linalg.norm(A))
    if small.size:
        raise SingularOperatorError(
            f"numerically singular matrix (pivot {int(small[0])})",
            witness=(int(small[0]),))
    return sla.lu_solve((lu, piv), b, check_finite=False)


def laplace_apply(coeffs, X):
    """Apply ``X -> sum_mu X x_mu A_mu``."""
    return sum(mode_multiply(X, A, mu) for mu, A in enumerate(coeffs))


def gsylv_apply(coeffs, C, X):
    """Apply ``X -> X x_1 A_1 + X x_1 C x_2 A_2 ... x_d A_d``."""
    Y = mode_multiply(X, C, 0)
    for mu, A in enumerate(coeffs[1:], start=1):
        Y = mode_multiply(Y, A, mu)
    return mode_multiply(X, coeffs[0], 0) + Y


def residual(problem, X):
    """Relative Frobenius residual of `X` for the original (unreduced) problem.

    ``||op(X) - B|| / (scale * ||X|| + ||B||)``, with ``scale`` the sum of
    coefficient norms (Laplace-like) or ``||A_1|| + ||C|| prod ||A_mu||``
    (generalized Sylvester).
    """
    norms = [np.linalg.norm(A) for A in problem.coeffs]
    if isinstance(problem, LaplaceProblem):
        R = laplace_apply(problem.coeffs, X) - problem.rhs
        scale = sum(norms)
    elif isinstance(problem, GSylvProblem):
        R = gsylv_apply(problem.coeffs, problem.c_coeff, X) - problem.rhs
        scale = norms[0] + np.linalg.norm(problem.c_coeff) * np.prod(norms[1:])
    else:
        raise TypeError(f"unsupported problem type {type(problem).__name__}")
    denom = scale * np.linalg.norm(X) + np.linalg.norm(problem.rhs)
    if denom == 0:
        return 0.0
    return float(np.linalg.norm(R) / denom)


def oracle_solve(problem, cap=DEFAULT_CAP):
    """Solve a problem by assembling its full matrix and running dense LU."""
    if isinstance(problem, LaplaceProblem):
        M = assemble_laplace_matrix(problem.coeffs, cap)
    else:
        M = assemble_gsylv_matrix(problem.coeffs, problem.c_coeff, cap)
    x = dense_solve(M, vectorize(problem.rhs))
    return from_vector(x, problem.dims)
