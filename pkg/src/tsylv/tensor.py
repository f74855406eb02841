"""Column-major dense tensor primitives.

Tensors are plain :class:`numpy.ndarray` objects whose element
``X[i1, ..., id]`` is addressed with the first index varying fastest, so the
flat buffer of a Fortran-ordered array is exactly ``vec(X)`` as it appears in
the Kronecker representation of the operators solved by this package.
Modes are 0-based axes, as everywhere else in numpy.
"""
import numpy as np

__all__ = [
    "as_tensor",
    "vectorize",
    "from_vector",
    "matricize",
    "tensorize",
    "mode_multiply",
    "mode_split",
    "mode_concat",
    "merge_modes",
    "unmerge_modes",
]


def _check_mode(ndim, mode):
    if not 0 <= mode < ndim:
        raise ValueError(f"mode {mode} out of range for a tensor of order {ndim}")


def as_tensor(X):
    """Return `X` as a Fortran-contiguous array (no copy when already so)."""
    return np.asfortranarray(X)


def vectorize(X):
    """Flatten `X` with the first index fastest."""
    return np.ravel(X, order="F")


def from_vector(x, dims):
    """Inverse of :func:`vectorize`."""
    return np.reshape(x, tuple(dims), order="F")


def matricize(X, mode):
    """Mode-`mode` unfolding: rows indexed by `mode`, columns by the rest.

    Column ordering keeps the remaining modes in their original order with the
    lowest one varying fastest.
    """
    X = np.asarray(X)
    _check_mode(X.ndim, mode)
    n = X.shape[mode]
    return np.reshape(np.moveaxis(X, mode, 0), (n, -1), order="F")


def tensorize(M, mode, dims):
    """Fold a mode-`mode` unfolding back into a tensor of shape `dims`."""
    dims = tuple(dims)
    _check_mode(len(dims), mode)
    rest = dims[:mode] + dims[mode + 1:]
    T = np.reshape(M, (dims[mode],) + rest, order="F")
    return np.asfortranarray(np.moveaxis(T, 0, mode))


def mode_multiply(X, A, mode):
    """Return ``Y = X x_mode A``, i.e. ``matricize(Y, mode) = A @ matricize(X, mode)``.

    Parameters
    ----------
    X : ndarray
        Tensor of shape ``(n_1, ..., n_d)``.
    A : ndarray
        Matrix of shape ``(m, n_mode)``.
    mode : int
        0-based mode index.

    Returns
    -------
    Y : ndarray
        Fortran-ordered tensor with ``n_mode`` replaced by ``m``.
    """
    X = np.asfortranarray(X)
    A = np.asarray(A)
    _check_mode(X.ndim, mode)
    dims = X.shape
    n = dims[mode]
    if A.ndim != 2 or A.shape[1] != n:
        raise ValueError(
            f"matrix of shape {A.shape} cannot act on mode {mode} of size {n}")
    m = A.shape[0]
    out_dims = dims[:mode] + (m,) + dims[mode + 1:]
    p = int(np.prod(dims[:mode], dtype=np.int64))
    q = int(np.prod(dims[mode + 1:], dtype=np.int64))
    if mode == 0:
        # columns of the unfolding are contiguous; one GEMM on the flat buffer
        Xt = np.reshape(X, (n, q), order="F").T
        Y = (Xt @ A.T).T
    else:
        # batch over trailing modes: each slab is an F-contiguous p x n matrix
        Xt = np.reshape(X, (p, n, q), order="F").T
        Y = np.matmul(A, Xt).T
    return np.reshape(Y, out_dims, order="F")


def mode_split(X, mode, k):
    """Split `X` along `mode` into index ranges ``[0, k)`` and ``[k, n_mode)``."""
    X = np.asarray(X)
    _check_mode(X.ndim, mode)
    n = X.shape[mode]
    if not 0 < k < n:
        raise ValueError(f"split point {k} must satisfy 0 < k < {n}")
    first = [slice(None)] * X.ndim
    second = [slice(None)] * X.ndim
    first[mode] = slice(0, k)
    second[mode] = slice(k, n)
    return (np.asfortranarray(X[tuple(first)]),
            np.asfortranarray(X[tuple(second)]))


def mode_concat(X1, X2, mode):
    """Inverse of :func:`mode_split`."""
    return np.concatenate((X1, X2), axis=mode)


def merge_modes(X, mode):
    """Fuse modes `mode` and ``mode + 1`` into one mode of size ``n_mode * n_{mode+1}``.

    The fused index is ``i_mode + n_mode * i_{mode+1}``, which makes this a
    pure reshape of the column-major buffer.
    """
    X = np.asfortranarray(X)
    _check_mode(X.ndim, mode)
    if mode == X.ndim - 1:
        raise ValueError("cannot merge the last mode with a successor")
    dims = X.shape
    fused = dims[:mode] + (dims[mode] * dims[mode + 1],) + dims[mode + 2:]
    return np.reshape(X, fused, order="F")


def unmerge_modes(X, mode, n_first, n_second):
    """Split the fused mode `mode` back into sizes ``(n_first, n_second)``."""
    X = np.asfortranarray(X)
    _check_mode(X.ndim, mode)
    if X.shape[mode] != n_first * n_second:
        raise ValueError(
            f"mode {mode} has size {X.shape[mode]}, expected {n_first * n_second}")
    dims = X.shape[:mode] + (n_first, n_second) + X.shape[mode + 1:]
    return np.reshape(X, dims, order="F")
