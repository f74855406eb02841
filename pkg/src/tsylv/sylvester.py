"""Recursive blocked solvers for triangular (generalized) Sylvester equations.

Both solvers accept upper triangular coefficients (complex Schur form) or
upper quasi-triangular ones (real Schur form); the transpose in
``X A2^T`` is the plain transpose in either case, which is what the mode-2
product ``X x_2 A2`` of a matrix amounts to.
"""
import numpy as np
from scipy.linalg.lapack import get_lapack_funcs

from .errors import SingularOperatorError
from .kernels import (diagonal_eigenvalues, kron, pencil_eigenpairs,
                      quasi_block_sizes, solve_kron_structured, unit_roundoff)

__all__ = ["DEFAULT_BASE_NMIN", "split_point", "solve_sylvester_tri",
           "solve_gsylv_tri"]

DEFAULT_BASE_NMIN = 32


def split_point(A):
    """Return ``k ~ n/2`` such that ``A[k, k-1] == 0``, or ``None`` if none exists.

    Bumps past a 2x2 diagonal block instead of cutting through it.
    """
    n = A.shape[0]
    k = n // 2
    if k > 0 and A[k, k - 1] != 0:
        k += 1
    if not 0 < k < n:
        return None
    return k


def _result_dtype(*arrays):
    return np.result_type(*arrays, np.float64)


def _check_quasi(*mats):
    for A in mats:
        if not np.iscomplexobj(A):
            quasi_block_sizes(A)
        elif A.shape[0] > 1 and np.any(np.tril(A, -1)):
            raise ValueError("complex coefficients must be upper triangular")


def _is_triangular(A):
    return A.shape[0] < 2 or not np.any(np.diagonal(A, -1))


def _sylv_base(A1, A2, B):
    if np.iscomplexobj(B) or (_is_triangular(A1) and _is_triangular(A2)):
        return _sylv_trsyl(A1, A2, B)
    n1, n2 = B.shape
    M = kron(np.eye(n2), A1) + kron(A2, np.eye(n1))
    x = solve_kron_structured(M, np.ravel(B, order="F"), [A1, A2])
    return np.reshape(x, (n1, n2), order="F")


def _sylv_trsyl(A1, A2, B):
    # LAPACK ?trsyl; complex flavours only offer a conjugate transpose
    (trsyl,) = get_lapack_funcs(("trsyl",), (A1, A2, B))
    if np.iscomplexobj(B):
        X, scale, info = trsyl(A1, A2.conj(), B, trana="N", tranb="C")
    else:
        X, scale, info = trsyl(A1, A2, B, trana="N", tranb="T")
    if info < 0:
        raise ValueError(f"illegal argument {-info} to trsyl")
    if info == 1:
        raise SingularOperatorError(
            "coefficients have (nearly) opposite eigenvalues; "
            "the Sylvester operator is singular")
    return X / scale if scale != 1.0 else X


def _sylv_rec(A1, A2, B, n_min):
    n1, n2 = B.shape
    if max(n1, n2) <= n_min:
        return _sylv_base(A1, A2, B)
    if n1 >= n2:
        k = split_point(A1)
        if k is None:
            return _sylv_base(A1, A2, B)
        X2 = _sylv_rec(A1[k:, k:], A2, B[k:], n_min)
        B1 = B[:k] - A1[:k, k:] @ X2
        X1 = _sylv_rec(A1[:k, :k], A2, B1, n_min)
        return np.vstack((X1, X2))
    k = split_point(A2)
    if k is None:
        return _sylv_base(A1, A2, B)
    X2 = _sylv_rec(A1, A2[k:, k:], B[:, k:], n_min)
    B1 = B[:, :k] - X2 @ A2[:k, k:].T
    X1 = _sylv_rec(A1, A2[:k, :k], B1, n_min)
    return np.hstack((X1, X2))


def solve_sylvester_tri(A1, A2, B, n_min=DEFAULT_BASE_NMIN, check=True):
    """Solve ``A1 @ X + X @ A2.T = B`` with (quasi-)upper triangular A1, A2.

    The larger dimension is halved recursively (rows on ties); blocks with
    both sizes at most `n_min` go to LAPACK ``trsyl`` when triangular, or
    to block back substitution on the assembled ``A2 (x) I + I (x) A1``
    operator when a real coefficient has 2x2 blocks.

    Parameters
    ----------
    A1 : (n1, n1) ndarray
    A2 : (n2, n2) ndarray
    B : (n1, n2) ndarray
    n_min : int
        Recursion cutoff, at least 1.
    check : bool
        Reject operators with ``|lambda_i(A1) + lambda_j(A2)|`` below
        ``u * (||A1||_F + ||A2||_F)`` before solving.

    Raises
    ------
    SingularOperatorError
        With the offending eigenvalue pair in `witness` and their diagonal
        positions in `indices`.
    """
    A1 = np.asarray(A1)
    A2 = np.asarray(A2)
    B = np.asarray(B)
    if B.shape != (A1.shape[0], A2.shape[0]):
        raise ValueError(
            f"rhs shape {B.shape} does not match coefficients "
            f"{A1.shape[0]} x {A2.shape[0]}")
    if n_min < 1:
        raise ValueError("n_min must be at least 1")
    dtype = _result_dtype(A1, A2, B)
    if check:
        _check_quasi(A1, A2)
        l1 = diagonal_eigenvalues(A1)
        l2 = diagonal_eigenvalues(A2)
        S = np.abs(l1[:, None] + l2[None, :])
        i, j = np.unravel_index(np.argmin(S), S.shape)
        tol = unit_roundoff(dtype) * (np.linalg.norm(A1) + np.linalg.norm(A2))
        if S[i, j] < tol:
            raise SingularOperatorError(
                f"eigenvalues {l1[i]} and {l2[j]} sum to (nearly) zero",
                witness=(l1[i], l2[j]), indices=(int(i), int(j)))
    return _sylv_rec(A1.astype(dtype, copy=False), A2.astype(dtype, copy=False),
                     B.astype(dtype, copy=False), n_min)


def _gsylv_sweep(A1, C, A2, B):
    # column j: (A1 + a2_jj C) x_j = b_j - C sum_{k>j} a2_jk x_k
    piv = np.diagonal(A1)[:, None] + np.diagonal(C)[:, None] * np.diagonal(A2)
    if not np.all(piv):
        i, j = np.argwhere(piv == 0)[0]
        raise SingularOperatorError(
            f"zero pivot at row {i} of column {j}", witness=(int(i), int(j)))
    (trtrs,) = get_lapack_funcs(("trtrs",), (A1, C, B))
    n2 = B.shape[1]
    X = np.empty_like(B)
    Y = np.empty_like(B)
    for j in range(n2 - 1, -1, -1):
        rhs = B[:, j] - Y[:, j + 1:] @ A2[j, j + 1:]
        x, info = trtrs(A1 + A2[j, j] * C, rhs)
        X[:, j] = x
        Y[:, j] = C @ x
    return X


def _gsylv_base(A1, C, A2, B):
    if _is_triangular(A1) and _is_triangular(A2):
        return _gsylv_sweep(A1, C, A2, B)
    n1, n2 = B.shape
    M = kron(np.eye(n2), A1) + kron(A2, C)
    x = solve_kron_structured(M, np.ravel(B, order="F"), [A1, A2])
    return np.reshape(x, (n1, n2), order="F")


def _gsylv_rec(A1, C, A2, B, n_min):
    n1, n2 = B.shape
    if max(n1, n2) <= n_min:
        return _gsylv_base(A1, C, A2, B)
    if n1 >= n2:
        k = split_point(A1)
        if k is None:
            return _gsylv_base(A1, C, A2, B)
        X2 = _gsylv_rec(A1[k:, k:], C[k:, k:], A2, B[k:], n_min)
        B1 = B[:k] - A1[:k, k:] @ X2 - C[:k, k:] @ (X2 @ A2.T)
        X1 = _gsylv_rec(A1[:k, :k], C[:k, :k], A2, B1, n_min)
        return np.vstack((X1, X2))
    k = split_point(A2)
    if k is None:
        return _gsylv_base(A1, C, A2, B)
    X2 = _gsylv_rec(A1, C, A2[k:, k:], B[:, k:], n_min)
    B1 = B[:, :k] - C @ (X2 @ A2[:k, k:].T)
    X1 = _gsylv_rec(A1, C, A2[:k, :k], B1, n_min)
    return np.hstack((X1, X2))


def solve_gsylv_tri(A1, C, A2, B, n_min=DEFAULT_BASE_NMIN, check=True):
    """Solve ``A1 @ X + C @ X @ A2.T = B`` for reduced coefficients.

    `A1` and `A2` are (quasi-)upper triangular, `C` is upper triangular.
    The operator is singular when the pencil ``A1 + lambda C`` is singular
    or ``a1_ii + c_ii * lambda_j(A2)`` vanishes for some ``i, j``.
    """
    A1 = np.asarray(A1)
    C = np.asarray(C)
    A2 = np.asarray(A2)
    B = np.asarray(B)
    if C.shape != A1.shape:
        raise ValueError(f"C has shape {C.shape}, expected {A1.shape}")
    if B.shape != (A1.shape[0], A2.shape[0]):
        raise ValueError(
            f"rhs shape {B.shape} does not match coefficients "
            f"{A1.shape[0]} x {A2.shape[0]}")
    if n_min < 1:
        raise ValueError("n_min must be at least 1")
    dtype = _result_dtype(A1, C, A2, B)
    if check:
        _check_quasi(A1, A2)
        if C.shape[0] > 1 and np.any(np.tril(C, -1)):
            raise ValueError("C must be upper triangular")
        alpha, beta = pencil_eigenpairs(A1, C)
        l2 = diagonal_eigenvalues(A2)
        S = np.abs(alpha[:, None] + beta[:, None] * l2[None, :])
        i, j = np.unravel_index(np.argmin(S), S.shape)
        tol = unit_roundoff(dtype) * (
            np.linalg.norm(A1) + np.linalg.norm(C) * np.linalg.norm(A2))
        if S[i, j] < tol:
            raise SingularOperatorError(
                f"a1[{i}] + c[{i}] * lambda[{j}] = {alpha[i] + beta[i] * l2[j]} "
                "is (nearly) zero",
                witness=(alpha[i], beta[i], l2[j]), indices=(int(i), int(j)))
    A1, C, A2, B = (M.astype(dtype, copy=False) for M in (A1, C, A2, B))
    return _gsylv_rec(A1, C, A2, B, n_min)
