import itertools

import numpy as np
import pytest
from scipy.linalg import schur
from hypothesis import given, settings, strategies as st

from helpers import rand_quasi, rand_tri, rel_err
from tsylv import (LaplaceProblem, SingularOperatorError, SolverConfig,
                   check_solvable_laplace, merge_pair, mrglap, reclap,
                   solve_laplace, solve_sylvester_tri)
from tsylv.kernels import unit_roundoff
from tsylv.bench import random_problem, solve_problem
from tsylv.oracle import assemble_laplace_matrix, oracle_solve
from tsylv.sylvester import split_point

U_RND = unit_roundoff()


def _diag_problem(rng, dims):
    diags = [rng.uniform(1, 3, n) for n in dims]
    B = rng.standard_normal(dims)
    denom = sum(np.meshgrid(*diags, indexing="ij"))
    return [np.diag(d) for d in diags], B, B / denom


def _dense(coeffs, B):
    x = np.linalg.solve(assemble_laplace_matrix(coeffs), B.ravel(order="F"))
    return x.reshape(B.shape, order="F")


def test_check_solvable_singular_pair():
    v = check_solvable_laplace([np.diag([1.0]), np.diag([-1.0])], 1e-12)
    assert not v.ok
    assert v.witness == (1.0, -1.0)
    with pytest.raises(SingularOperatorError):
        v.raise_if_singular()


def test_check_solvable_identities():
    v = check_solvable_laplace([np.eye(3), np.eye(2), np.eye(4)], 1e-12)
    assert v.ok and v.min_abs == pytest.approx(3.0)


def test_check_solvable_matches_exhaustive_scan():
    rng = np.random.default_rng(0)
    coeffs = [rand_tri(rng, n, shift=3.0) for n in (3, 4, 2)]
    v = check_solvable_laplace(coeffs, 1e-12)
    diags = [np.diagonal(A) for A in coeffs]
    best = min(itertools.product(*[range(len(d)) for d in diags]),
               key=lambda idx: abs(sum(d[i] for d, i in zip(diags, idx))))
    assert v.ok
    assert v.indices == best
    assert v.min_abs == pytest.approx(abs(sum(d[i] for d, i in zip(diags, best))))


def test_merge_pair_small_cases():
    np.testing.assert_array_equal(merge_pair(np.array([[2.0]]), np.array([[5.0]])), [[7.0]])
    np.testing.assert_array_equal(merge_pair(np.eye(2), np.eye(3)), 2 * np.eye(6))
    np.testing.assert_array_equal(merge_pair(np.diag([1.0, 2.0]), np.diag([10.0, 20.0])),
                                  np.diag([11.0, 12.0, 21.0, 22.0]))


def test_merge_pair_matches_kron_sum():
    rng = np.random.default_rng(1)
    A1 = rand_tri(rng, 4)
    A2 = rand_tri(rng, 3)
    M = merge_pair(A1, A2)
    np.testing.assert_array_equal(M, np.kron(np.eye(3), A1) + np.kron(A2, np.eye(4)))
    assert not np.any(np.tril(M, -1))


def test_solve_laplace_decoupled():
    rng = np.random.default_rng(2)
    coeffs, B, X = _diag_problem(rng, (3, 4, 5))
    for strategy in ("merge", "recursion_only"):
        rep = solve_laplace(LaplaceProblem(coeffs, B), SolverConfig(strategy=strategy))
        assert rel_err(rep.solution, X) < 1e-13


def test_solve_laplace_order_two_matches_sylvester():
    rng = np.random.default_rng(3)
    A1, A2 = rng.standard_normal((2, 6, 6)) + 3 * np.eye(6)
    B = rng.standard_normal((6, 6))
    rep = solve_laplace(LaplaceProblem([A1, A2], B))
    T1, U1 = schur(A1, output="complex")
    T2, U2 = schur(A2, output="complex")
    Y = solve_sylvester_tri(T1, T2, U1.conj().T @ B @ U2.conj())
    X = (U1 @ Y @ U2.T).real
    assert rel_err(rep.solution, X) < 1e-10
    assert rel_err(rep.solution, oracle_solve(LaplaceProblem([A1, A2], B))) < 1e-10


@pytest.mark.parametrize("config", [
    SolverConfig(strategy="merge"),
    SolverConfig(strategy="recursion_only"),
    SolverConfig(strategy="recursion_only", arithmetic="real_quasitriangular"),
    SolverConfig(n_min=2, strategy="merge"),
])
def test_solve_laplace_random(config):
    rng = np.random.default_rng(4)
    coeffs = [rng.standard_normal((6, 6)) for _ in range(3)]
    B = rng.standard_normal((6, 6, 6))
    problem = LaplaceProblem(coeffs, B)
    rep = solve_laplace(problem, config)
    assert rel_err(rep.solution, oracle_solve(problem)) < 1e-10
    assert set(rep.timings) == {"reduction", "recursion", "back_transform", "total"}
    assert np.isrealobj(rep.solution)


def test_solve_laplace_complex_data():
    rng = np.random.default_rng(5)
    coeffs = [rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)) for _ in range(3)]
    B = rng.standard_normal((5, 5, 5)) + 1j * rng.standard_normal((5, 5, 5))
    problem = LaplaceProblem(coeffs, B)
    rep = solve_laplace(problem)
    assert rep.discarded_imag == 0.0
    assert rel_err(rep.solution, oracle_solve(problem)) < 1e-10


def test_solve_laplace_singular():
    A = np.diag([1.0, 2.0])
    problem = LaplaceProblem([A, -A], np.ones((2, 2)))
    with pytest.raises(SingularOperatorError):
        solve_laplace(problem)


def test_real_path_rejects_complex():
    problem = LaplaceProblem([np.eye(2) + 0j, np.eye(2)], np.ones((2, 2)))
    with pytest.raises(ValueError):
        solve_laplace(problem, SolverConfig(strategy="recursion_only",
                                            arithmetic="real_quasitriangular"))


def test_merge_requires_complex():
    with pytest.raises(ValueError):
        SolverConfig(strategy="merge", arithmetic="real_quasitriangular")


def test_reclap_direct_when_cutoff_large():
    rng = np.random.default_rng(6)
    coeffs = [rand_tri(rng, n, shift=3.0) for n in (4, 3, 5)]
    B = rng.standard_normal((4, 3, 5)) + 0j
    assert rel_err(reclap(coeffs, B, 5), _dense(coeffs, B)) < 1e-12


@pytest.mark.parametrize("n_min", [2, 3, 5])
def test_reclap_decoupled(n_min):
    rng = np.random.default_rng(7)
    coeffs, B, X = _diag_problem(rng, (6, 7, 5))
    assert rel_err(reclap(coeffs, B, n_min), X) < 1e-13


def test_reclap_against_dense():
    rng = np.random.default_rng(8)
    coeffs = [rand_tri(rng, n, shift=3.0) for n in (7, 6, 5)]
    B = rng.standard_normal((7, 6, 5)) + 0j
    assert rel_err(reclap(coeffs, B, 2), _dense(coeffs, B)) < 1e-10


@pytest.mark.parametrize("n_min", [2, 3, 4])
def test_reclap_real_quasi(n_min):
    rng = np.random.default_rng(9)
    coeffs = [rand_quasi(rng, n, shift=3.0) for n in (7, 6, 5)]
    B = rng.standard_normal((7, 6, 5))
    X = reclap(coeffs, B, n_min)
    assert np.isrealobj(X)
    assert rel_err(X, _dense(coeffs, B)) < 1e-10


def test_real_split_never_cuts_blocks():
    rng = np.random.default_rng(10)
    for _ in range(50):
        A = rand_quasi(rng, int(rng.integers(3, 20)))
        k = split_point(A)
        if k is not None:
            assert A[k, k - 1] == 0


def test_mrglap_decoupled():
    rng = np.random.default_rng(11)
    coeffs, B, X = _diag_problem(rng, (4, 5, 6))
    assert rel_err(mrglap([A + 0j for A in coeffs], B + 0j, 3), X) < 1e-13


def test_mrglap_merges_immediately():
    rng = np.random.default_rng(12)
    coeffs = [rand_tri(rng, 6, shift=3.0) for _ in range(3)]
    B = rng.standard_normal((6, 6, 6)) + 0j
    assert rel_err(mrglap(coeffs, B, 6), reclap(coeffs, B, 2)) < 1e-10


def test_mrglap_order_four():
    rng = np.random.default_rng(13)
    coeffs = [rand_tri(rng, 5, shift=3.0) for _ in range(4)]
    B = rng.standard_normal((5, 5, 5, 5)) + 0j
    assert rel_err(mrglap(coeffs, B, 3), _dense(coeffs, B)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(dims=st.lists(st.integers(2, 8), min_size=3, max_size=5), seed=st.integers(0, 2**32 - 1))
def test_algorithms_agree(dims, seed):
    if np.prod(dims) > 1500:
        dims = dims[:3]
    rng = np.random.default_rng(seed)
    coeffs = [rand_tri(rng, n, shift=len(dims)) for n in dims]
    B = rng.standard_normal(dims) + 0j
    X_ref = _dense(coeffs, B)
    for n_min in (2, 4, 8):
        assert rel_err(reclap(coeffs, B, n_min), X_ref) < 1e-9
        assert rel_err(mrglap(coeffs, B, n_min), X_ref) < 1e-9


def test_residual_bound_original_equation():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        dims = tuple(rng.integers(2, 9, size=3))
        coeffs = [rng.standard_normal((n, n)) / np.sqrt(n) + 2 * np.eye(n) for n in dims]
        problem = LaplaceProblem(coeffs, rng.standard_normal(dims))
        rep = solve_laplace(problem)
        assert rep.residual <= 1e3 * U_RND


def test_merge_flop_scaling_envelope():
    # t(2n)/t(n) for the merged solver at n = 40, 80 within [2**3.5, 2**4.5]
    config = SolverConfig(strategy="merge")
    problems = {n: random_problem("laplace", (n,) * 3, 0) for n in (40, 80)}
    t = {n: np.inf for n in problems}
    for _ in range(12):
        for n, problem in problems.items():
            t[n] = min(t[n], solve_problem(problem, config).timings["total"])
    assert 2 ** 3.5 <= t[80] / t[40] <= 2 ** 4.5
