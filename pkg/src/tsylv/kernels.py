"""Dense matrix kernels: (generalized) Schur forms, Kronecker products,
block back substitution and perfect-shuffle permutations."""
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceError, SingularOperatorError

__all__ = [
    "SchurFactorization",
    "GeneralizedSchurFactorization",
    "unit_roundoff",
    "schur",
    "qz",
    "kron",
    "quasi_block_sizes",
    "diagonal_eigenvalues",
    "pencil_eigenpairs",
    "block_back_substitution",
    "kron_block_order",
    "solve_kron_structured",
    "perfect_shuffle",
    "shuffle_block_structure",
]


def unit_roundoff(dtype=np.float64):
    """Unit roundoff ``u = eps / 2`` of the real type underlying `dtype`."""
    return float(np.finfo(np.dtype(dtype)).eps) / 2


@dataclass(frozen=True)
class SchurFactorization:
    """``A = U @ T @ U^H`` with `U` unitary and `T` (quasi-)upper triangular."""
    U: np.ndarray
    T: np.ndarray


@dataclass(frozen=True)
class GeneralizedSchurFactorization:
    """``A = U @ S @ Z^H`` and ``C = U @ T @ Z^H``; `T` is always triangular."""
    U: np.ndarray
    Z: np.ndarray
    S: np.ndarray
    T: np.ndarray


def _check_kind(kind, *mats):
    if kind not in ("real", "complex"):
        raise ValueError(f"kind must be 'real' or 'complex', got {kind!r}")
    if kind == "real" and any(np.iscomplexobj(M) for M in mats):
        raise ValueError("real Schur forms require real input")


def _check_square(name, A):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")


def schur(A, kind="complex"):
    """Schur decomposition of a square matrix.

    Backed by LAPACK (``gees``). With ``kind='complex'`` the factor `T` is
    upper triangular and lists the eigenvalues on its diagonal; with
    ``kind='real'`` it is quasi-triangular with standardized 2x2 blocks for
    complex-conjugate pairs.
    """
    A = np.asarray(A)
    _check_square("A", A)
    _check_kind(kind, A)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    try:
        T, U = sla.schur(A, output=kind)
    except sla.LinAlgError as exc:
        raise ConvergenceError(f"Schur iteration failed: {exc}") from exc
    return SchurFactorization(U=U, T=T)


def qz(A, C, kind="complex"):
    """Generalized Schur decomposition of the pencil ``(A, C)`` (LAPACK ``gges``)."""
    A = np.asarray(A)
    C = np.asarray(C)
    _check_square("A", A)
    _check_square("C", C)
    if A.shape != C.shape:
        raise ValueError(f"pencil shapes differ: {A.shape} vs {C.shape}")
    _check_kind(kind, A, C)
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(C))):
        raise ValueError("pencil contains non-finite entries")
    try:
        S, T, U, Z = sla.qz(A, C, output=kind)
    except sla.LinAlgError as exc:
        raise ConvergenceError(f"QZ iteration failed: {exc}") from exc
    return GeneralizedSchurFactorization(U=U, Z=Z, S=S, T=T)


def kron(A, B):
    """Kronecker product; ``kron(A, B)[i*q + k, j*s + l] = A[i, j] * B[k, l]``."""
    A = np.asarray(A)
    B = np.asarray(B)
    p, r = A.shape
    q, s = B.shape
    K = A[:, None, :, None] * B[None, :, None, :]
    return K.reshape(p * q, r * s)


def quasi_block_sizes(T):
    """Diagonal block sizes (1 or 2) of an upper quasi-triangular matrix.

    Raises ``ValueError`` if `T` has nonzeros below the first subdiagonal or
    two consecutive nonzero subdiagonal entries.
    """
    T = np.asarray(T)
    _check_square("T", T)
    n = T.shape[0]
    if n > 2 and np.any(np.tril(T, -2)):
        raise ValueError("matrix is not quasi-triangular")
    sub = np.diagonal(T, -1) != 0
    sizes = []
    i = 0
    while i < n:
        if i + 1 < n and sub[i]:
            if i + 2 < n and sub[i + 1]:
                raise ValueError(
                    f"consecutive subdiagonal entries at {i} and {i + 1}")
            sizes.append(2)
            i += 2
        else:
            sizes.append(1)
            i += 1
    return sizes


def diagonal_eigenvalues(T):
    """Eigenvalues of a (quasi-)triangular matrix, aligned with its diagonal."""
    T = np.asarray(T)
    if np.iscomplexobj(T):
        return np.diagonal(T).copy()
    lam = np.diagonal(T).astype(complex)
    i = 0
    for size in quasi_block_sizes(T):
        if size == 2:
            lam[i:i + 2] = np.linalg.eigvals(T[i:i + 2, i:i + 2])
        i += size
    return lam


def pencil_eigenpairs(S, T):
    """Homogeneous eigenvalue pairs ``(alpha, beta)`` of a reduced pencil.

    For triangular `S` these are simply the diagonals of `S` and `T`; 2x2
    blocks of a real quasi-triangular `S` are resolved individually.
    """
    S = np.asarray(S)
    T = np.asarray(T)
    alpha = np.diagonal(S).astype(complex)
    beta = np.diagonal(T).astype(complex)
    if np.iscomplexobj(S):
        return alpha, beta
    i = 0
    for size in quasi_block_sizes(S):
        if size == 2:
            ab = sla.eigvals(S[i:i + 2, i:i + 2], T[i:i + 2, i:i + 2],
                             homogeneous_eigvals=True)
            alpha[i:i + 2], beta[i:i + 2] = ab[0], ab[1]
        i += size
    return alpha, beta


def _solve_2x2(M, r, tiny, offset):
    # Gaussian elimination with partial pivoting on a 2x2 block
    if abs(M[1, 0]) > abs(M[0, 0]):
        M = M[::-1]
        r = r[::-1]
    if abs(M[0, 0]) < tiny:
        raise SingularOperatorError(
            f"zero pivot in 2x2 block at index {offset}", witness=(offset,))
    l = M[1, 0] / M[0, 0]
    u22 = M[1, 1] - l * M[0, 1]
    if abs(u22) < tiny:
        raise SingularOperatorError(
            f"zero pivot in 2x2 block at index {offset + 1}",
            witness=(offset + 1,))
    x2 = (r[1] - l * r[0]) / u22
    x1 = (r[0] - M[0, 1] * x2) / M[0, 0]
    return np.stack([x1, x2])


def block_back_substitution(T, b, blocks=None):
    """Solve ``T x = b`` for block upper triangular `T`.

    Parameters
    ----------
    T : (n, n) ndarray
    b : (n,) or (n, k) ndarray
    blocks : sequence of int, optional
        Sizes of the diagonal blocks, in order. ``None`` means `T` is
        triangular (all blocks of size one).

    Raises
    ------
    SingularOperatorError
        If a pivot is smaller than ``u * ||T||_F``; `witness` holds the index.
    """
    T = np.asarray(T)
    b = np.asarray(b)
    _check_square("T", T)
    n = T.shape[0]
    if b.shape[0] != n:
        raise ValueError(f"right-hand side has {b.shape[0]} rows, expected {n}")
    dtype = np.result_type(T, b, np.float64)
    tiny = unit_roundoff(dtype) * np.linalg.norm(T)
    if blocks is None or all(s == 1 for s in blocks):
        d = np.abs(np.diagonal(T))
        bad = np.flatnonzero(d <= tiny)
        if bad.size:
            i = int(bad[-1])
            raise SingularOperatorError(
                f"zero pivot at diagonal index {i}", witness=(i,))
        return sla.solve_triangular(T, b, lower=False, check_finite=False)
    if sum(blocks) != n:
        raise ValueError(f"block sizes sum to {sum(blocks)}, expected {n}")
    x = np.array(b, dtype=dtype, copy=True)
    ends = np.cumsum(blocks)
    for size, end in zip(reversed(blocks), reversed(ends)):
        start = end - size
        Tb = T[start:end, start:end]
        rb = x[start:end]
        if size == 1:
            if abs(Tb[0, 0]) <= tiny:
                raise SingularOperatorError(
                    f"zero pivot at diagonal index {start}", witness=(start,))
            xb = rb / Tb[0, 0]
        elif size == 2:
            xb = _solve_2x2(Tb, rb, tiny, start)
        else:
            lu, piv = sla.lu_factor(Tb, check_finite=False)
            small = np.flatnonzero(np.abs(np.diagonal(lu)) <= tiny)
            if small.size:
                i = start + int(small[0])
                raise SingularOperatorError(
                    f"singular diagonal block containing index {i}",
                    witness=(i,))
            xb = sla.lu_solve((lu, piv), rb, check_finite=False)
        x[start:end] = xb
        if start:
            x[:start] -= T[:start, start:end] @ xb
    return x


def kron_block_order(mode_blocks):
    """Permutation making an assembled Kronecker-sum operator block triangular.

    `mode_blocks` lists, per mode (first mode fastest), the diagonal block
    sizes of that mode's quasi-triangular coefficient. Every tuple of
    per-mode blocks forms one diagonal block of the assembled operator;
    ordering those tuples column-major yields a block upper triangular matrix.

    Returns
    -------
    perm : ndarray of int
        ``M[perm][:, perm]`` is block upper triangular.
    sizes : list of int
        Its diagonal block sizes.
    """
    ids = [np.repeat(np.arange(len(s)), s) for s in mode_blocks]
    counts = [len(s) for s in mode_blocks]
    strides = np.cumprod([1] + counts[:-1])
    grids = np.meshgrid(*ids, indexing="ij")
    block_id = sum(g * st for g, st in zip(grids, strides))
    block_id = np.ravel(block_id, order="F")
    perm = np.argsort(block_id, kind="stable")
    sizes = np.bincount(block_id).tolist()
    return perm, sizes


def _leading_blocks(A):
    # block sizes from the subdiagonal only; callers guarantee quasi-triangularity
    A = np.asarray(A)
    n = A.shape[0]
    if n < 2 or not np.any(np.diagonal(A, -1)):
        return [1] * n
    return quasi_block_sizes(A)


def solve_kron_structured(M, b, coeffs):
    """Back-substitute an assembled operator built from (quasi-)triangular factors.

    `coeffs` are the per-mode factors (first mode first) whose block
    structure determines that of `M`.
    """
    mode_blocks = [_leading_blocks(A) for A in coeffs]
    if all(s == 1 for blk in mode_blocks for s in blk):
        return block_back_substitution(M, b)
    perm, sizes = kron_block_order(mode_blocks)
    y = block_back_substitution(M[np.ix_(perm, perm)], b[perm], sizes)
    x = np.empty_like(y)
    x[perm] = y
    return x


def perfect_shuffle(p, q):
    """Index permutation `perm` with ``kron(A, B)[perm][:, perm] == kron(B, A)``.

    `A` is ``p x p`` and `B` is ``q x q``. As a matrix, ``P = I[:, perm]``.
    """
    if p < 1 or q < 1:
        raise ValueError("shuffle dimensions must be positive")
    return np.arange(p * q).reshape(p, q).T.ravel()


def shuffle_block_structure(A1, A2, kind="laplace", return_matrix=False):
    """Diagonal block sizes of a merged coefficient after per-block shuffling.

    The merged matrix is ``I (x) A1 + A2 (x) I`` for ``kind='laplace'`` and
    ``A2 (x) A1`` for ``kind='kron'``. Each diagonal super-block belonging to
    a 2x2 block of `A2` is perfect-shuffled, after which the matrix is block
    upper triangular with blocks of size at most 4. The zero pattern below
    the reported blocks is verified before returning.

    Returns
    -------
    sizes : list of int
    (sizes, perm, shuffled) if `return_matrix` is true.
    """
    A1 = np.asarray(A1)
    A2 = np.asarray(A2)
    s1 = quasi_block_sizes(A1)
    s2 = quasi_block_sizes(A2)
    n1, n2 = A1.shape[0], A2.shape[0]
    if kind == "laplace":
        M = kron(np.eye(n2), A1) + kron(A2, np.eye(n1))
    elif kind == "kron":
        M = kron(A2, A1)
    else:
        raise ValueError(f"unknown merge kind {kind!r}")

    perm = []
    sizes = []
    offset = 0
    for size in s2:
        if size == 1:
            perm.extend(range(offset, offset + n1))
            sizes.extend(s1)
        else:
            perm.extend(offset + perfect_shuffle(2, n1))
            sizes.extend(2 * s for s in s1)
        offset += size * n1
    perm = np.asarray(perm)
    shuffled = M[np.ix_(perm, perm)]

    block_of = np.repeat(np.arange(len(sizes)), sizes)
    below = block_of[:, None] > block_of[None, :]
    if np.any(shuffled[below] != 0):
        raise AssertionError("shuffled merge is not block upper triangular")
    if return_matrix:
        return sizes, perm, shuffled
    return sizes
