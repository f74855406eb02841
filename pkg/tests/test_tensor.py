import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import mode_multiply_loops
from tsylv.tensor import (from_vector, matricize, merge_modes, mode_concat,
                          mode_multiply, mode_split, tensorize, unmerge_modes,
                          vectorize)

dims_st = st.lists(st.integers(1, 4), min_size=1, max_size=4)


def _index_tensor():
    X = np.empty((2, 2, 2), order="F")
    for i1, i2, i3 in np.ndindex(2, 2, 2):
        X[i1, i2, i3] = (i1 + 1) + 2 * i2 + 4 * i3
    return X


def test_matricize_first_mode():
    M = matricize(_index_tensor(), 0)
    np.testing.assert_array_equal(M, [[1, 3, 5, 7], [2, 4, 6, 8]])


def test_vectorize_is_first_index_fastest():
    np.testing.assert_array_equal(vectorize(_index_tensor()), np.arange(1, 9))


def test_matricize_order_one():
    x = np.arange(5.0)
    M = matricize(x, 0)
    assert M.shape == (5, 1)
    np.testing.assert_array_equal(M[:, 0], x)


def test_matricize_index_map():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((3, 4, 5))
    M = matricize(X, 1)
    for i1, i2, i3 in np.ndindex(3, 4, 5):
        assert M[i2, i1 + 3 * i3] == X[i1, i2, i3]
    np.testing.assert_array_equal(tensorize(M, 1, X.shape), X)


def test_matricize_bad_mode():
    with pytest.raises(ValueError):
        matricize(np.zeros((2, 2)), 2)


def test_mode_multiply_identity_and_zero():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((3, 4, 2))
    np.testing.assert_array_equal(mode_multiply(X, np.eye(4), 1), X)
    assert not np.any(mode_multiply(X, np.zeros((4, 4)), 1))


def test_mode_multiply_against_loops():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((3, 2, 2))
    A = rng.standard_normal((3, 3))
    np.testing.assert_allclose(mode_multiply(X, A, 0), mode_multiply_loops(X, A, 0),
                               rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("mode", [0, 1, 2])
def test_mode_multiply_rectangular(mode):
    rng = np.random.default_rng(3)
    X = rng.standard_normal((2, 3, 4)) + 1j * rng.standard_normal((2, 3, 4))
    A = rng.standard_normal((5, X.shape[mode]))
    Y = mode_multiply(X, A, mode)
    assert Y.shape[mode] == 5
    np.testing.assert_allclose(Y, mode_multiply_loops(X, A, mode), atol=1e-13)


def test_mode_multiply_shape_mismatch():
    with pytest.raises(ValueError):
        mode_multiply(np.zeros((2, 3)), np.zeros((3, 3)), 0)


@settings(max_examples=40, deadline=None)
@given(dims=st.lists(st.integers(1, 4), min_size=1, max_size=4), seed=st.integers(0, 2**32 - 1))
def test_kronecker_layout(dims, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal(dims)
    mats = [rng.standard_normal((n, n)) for n in dims]
    Y = X
    K = np.ones((1, 1))
    for mu, A in enumerate(mats):
        Y = mode_multiply(Y, A, mu)
        K = np.kron(A, K)
    np.testing.assert_allclose(vectorize(Y), K @ vectorize(X), rtol=1e-13, atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_mode_multiply_commutes_across_modes(seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((3, 4, 2))
    A = rng.standard_normal((3, 3))
    B = rng.standard_normal((4, 4))
    lhs = mode_multiply(mode_multiply(X, A, 0), B, 1)
    rhs = mode_multiply(mode_multiply(X, B, 1), A, 0)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(dims=st.lists(st.integers(2, 5), min_size=1, max_size=4), data=st.data())
def test_split_concat_round_trip(dims, data):
    mode = data.draw(st.integers(0, len(dims) - 1))
    k = data.draw(st.integers(1, dims[mode] - 1))
    X = np.random.default_rng(len(dims)).standard_normal(dims)
    X1, X2 = mode_split(X, mode, k)
    assert X1.shape[mode] == k and X2.shape[mode] == dims[mode] - k
    np.testing.assert_array_equal(mode_concat(X1, X2, mode), X)


def test_split_matrix_rows():
    X = np.array([[1.0, 2.0], [3.0, 4.0]])
    X1, X2 = mode_split(X, 0, 1)
    np.testing.assert_array_equal(X1, [[1.0, 2.0]])
    np.testing.assert_array_equal(X2, [[3.0, 4.0]])


@pytest.mark.parametrize("k", [0, 3])
def test_split_out_of_range(k):
    with pytest.raises(ValueError):
        mode_split(np.zeros((3, 2)), 0, k)


def test_merge_first_modes_keeps_buffer():
    X = np.asfortranarray(np.random.default_rng(4).standard_normal((2, 3, 4)))
    Xm = merge_modes(X, 0)
    assert Xm.shape == (6, 4)
    np.testing.assert_array_equal(vectorize(Xm), vectorize(X))
    assert np.shares_memory(Xm, X)


def test_merge_matrix_to_vector():
    X = np.arange(6.0).reshape(2, 3, order="F")
    Xm = merge_modes(X, 0)
    assert Xm.shape == (6,)
    np.testing.assert_array_equal(Xm, np.arange(6.0))


def test_merge_last_mode_rejected():
    with pytest.raises(ValueError):
        merge_modes(np.zeros((2, 3)), 1)


@settings(max_examples=40, deadline=None)
@given(dims=st.lists(st.integers(1, 4), min_size=2, max_size=5), data=st.data())
def test_merge_unmerge_round_trip(dims, data):
    mode = data.draw(st.integers(0, len(dims) - 2))
    X = np.random.default_rng(7).standard_normal(dims)
    Xm = merge_modes(X, mode)
    assert Xm.shape[mode] == dims[mode] * dims[mode + 1]
    np.testing.assert_array_equal(unmerge_modes(Xm, mode, dims[mode], dims[mode + 1]), X)
    np.testing.assert_array_equal(vectorize(Xm), vectorize(X))


def test_from_vector_inverts_vectorize():
    X = np.random.default_rng(5).standard_normal((2, 3, 2))
    np.testing.assert_array_equal(from_vector(vectorize(X), X.shape), X)
