import numpy as np


def rand_tri(rng, n, shift=0.0, cplx=True):
    """Random upper triangular matrix with `shift` added to the diagonal."""
    A = rng.standard_normal((n, n))
    if cplx:
        A = A + 1j * rng.standard_normal((n, n))
    return np.triu(A) + shift * np.eye(n)


def rand_quasi(rng, n, shift=0.0, n_bumps=None):
    """Real quasi-triangular matrix with randomly placed 2x2 blocks.

    Each 2x2 block ``[[a, b], [c, a]]`` has ``b * c < 0`` so its eigenvalues
    form a complex-conjugate pair ``a +- i sqrt(-bc)``.
    """
    A = np.triu(rng.standard_normal((n, n)))
    i = 0
    while i < n - 1:
        if rng.random() < 0.5:
            a = rng.standard_normal() + shift
            b = rng.uniform(0.5, 2.0)
            c = -rng.uniform(0.5, 2.0)
            A[i:i + 2, i:i + 2] = [[a, b], [c, a]]
            i += 2
        else:
            A[i, i] += shift
            i += 1
    if i == n - 1:
        A[i, i] += shift
    return A


def mode_multiply_loops(X, A, mode):
    dims = list(X.shape)
    out = dims.copy()
    out[mode] = A.shape[0]
    Y = np.zeros(out, dtype=np.result_type(X, A))
    for idx in np.ndindex(*out):
        src = list(idx)
        acc = 0
        for j in range(dims[mode]):
            src[mode] = j
            acc += A[idx[mode], j] * X[tuple(src)]
        Y[idx] = acc
    return Y


def rel_err(X, Y):
    return np.linalg.norm(X - Y) / np.linalg.norm(Y)


# (criterion number, passed, detail) collected by the acceptance suite
ACCEPTANCE = []


def report(number, ok, detail):
    ACCEPTANCE.append((number, bool(ok), detail))
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail
