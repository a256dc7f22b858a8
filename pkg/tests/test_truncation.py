import numpy as np
import pytest

from globalsnmf.errors import DimensionMismatch, InvalidRank, SingularBlock
from globalsnmf.linalg import pseudo_solve
from globalsnmf.truncation import (
    error_decomposition_diagnostic,
    reconstruction_error,
    truncate,
    unconstrained_factorize,
)

# Truncated-SVD errors of raw Wine, frozen from numpy.linalg.svd of the 13 x 178 matrix.
WINE_SVD_ERRORS = [
    498.52093820626465,
    70.14008098695975,
    40.66498098958909,
    27.342697930548304,
    20.09445494272268,
    13.950202800643481,
    8.533113859682894,
]


def svd_error(X, k):
    s = np.linalg.svd(X, compute_uv=False)
    return float(np.sqrt(np.sum(s[k:] ** 2)))


def test_full_rank_is_identity(rng):
    X = rng.standard_normal((4, 7))
    t = truncate(X, 4)
    np.testing.assert_allclose(t.matrix, X, atol=1e-12)
    assert t.discarded_sum == pytest.approx(0.0, abs=1e-12)


def test_rank_one_input_is_exact():
    X = np.outer([1.0, -2.0, 3.0], [0.5, 1.0, 2.0, -1.0])
    t = truncate(X, 1)
    assert np.abs(t.matrix - X).max() <= 1e-10


@pytest.mark.parametrize("k", [0, 5, 2.0])
def test_rank_out_of_range(k):
    with pytest.raises(InvalidRank):
        truncate(np.ones((4, 3)), k)


def test_reconstruction_error_conventions():
    assert reconstruction_error(np.array([[3.0]]), np.array([[0.0]])) == 3.0
    assert reconstruction_error(np.array([[3.0]]), np.array([[0.0]]), "squared") == 9.0
    X = np.ones((2, 2))
    assert reconstruction_error(X, X) == 0.0
    with pytest.raises(DimensionMismatch):
        reconstruction_error(X, np.ones((2, 3)))
    with pytest.raises(ValueError):
        reconstruction_error(X, X, "l1")


@pytest.mark.parametrize("k", range(1, 8))
def test_wine_truncation_matches_svd_and_table(wine_X, k):
    t = truncate(wine_X, k)
    err = reconstruction_error(wine_X, t.matrix)
    assert err == pytest.approx(WINE_SVD_ERRORS[k - 1], rel=1e-9)
    assert err ** 2 == pytest.approx(t.discarded_sum, rel=1e-8)


def test_wine_rank1_convention(wine_X):
    # published 498.520935 matches the plain norm, not its square
    t = truncate(wine_X, 1)
    assert reconstruction_error(wine_X, t.matrix) == pytest.approx(498.520935, rel=1e-3)
    assert reconstruction_error(wine_X, t.matrix, "squared") != pytest.approx(498.520935, rel=1e-3)


def test_wine_rank2_published(wine_X):
    assert reconstruction_error(wine_X, truncate(wine_X, 2).matrix) == pytest.approx(70.140083, rel=1e-3)


def test_truncation_rank_and_retained(rng):
    X = rng.standard_normal((6, 20))
    t = truncate(X, 3)
    assert np.linalg.matrix_rank(t.matrix, tol=1e-9 * np.linalg.norm(t.matrix, 2)) == 3
    assert t.retained_eigenvalues.shape == (3,)
    assert t.discarded_sum == pytest.approx(t.basis.eigenvalues[3:].sum())


def test_error_decomposition_full_rank(rng):
    tail, resid = error_decomposition_diagnostic(rng.standard_normal((3, 5)), 3)
    assert tail == 0.0
    assert resid <= 1e-8


def test_error_decomposition_rank_one():
    X = np.outer([1.0, 2.0, 2.0], np.arange(1.0, 6.0))
    tail, resid = error_decomposition_diagnostic(X, 1)
    assert tail <= 1e-10 * np.sum(X * X)
    assert resid <= 1e-8


def test_error_decomposition_eigen_tail():
    X = np.random.default_rng(11).standard_normal((4, 10))
    tail, resid = error_decomposition_diagnostic(X, 2)
    lam = np.sort(np.linalg.eigvalsh(X @ X.T))[::-1]
    assert tail == pytest.approx(lam[2] + lam[3], rel=1e-8)
    assert resid <= 1e-8 * max(tail, 1.0)


def test_unconstrained_decoupled_blocks():
    # zero top block, identity bottom block
    Xp = np.vstack([np.zeros((2, 3)), np.eye(3)])
    t = truncate(Xp, 3)
    uf = unconstrained_factorize(t)
    assert not uf.permuted
    np.testing.assert_allclose(uf.A, 0.0, atol=1e-12)
    np.testing.assert_allclose(uf.C, t.matrix[2:], atol=1e-12)


def test_unconstrained_reproduces(rng):
    X = rng.standard_normal((6, 12))
    t = truncate(X, 3)
    uf = unconstrained_factorize(t)
    assert np.linalg.norm(uf.basis @ uf.C - t.matrix[uf.row_permutation]) <= 1e-8 * np.linalg.norm(t.matrix)
    assert np.linalg.norm(uf.reconstruct() - t.matrix) <= 1e-8 * np.linalg.norm(t.matrix)
    np.testing.assert_array_equal(uf.basis[3:], np.eye(3))


def test_unconstrained_coefficients_are_least_squares():
    X = np.random.default_rng(5).standard_normal((5, 8))
    t = truncate(X, 3)
    uf = unconstrained_factorize(t)
    oracle = pseudo_solve(uf.basis, t.matrix[uf.row_permutation])
    np.testing.assert_allclose(uf.C, oracle, atol=1e-8)


def test_unconstrained_permutes_singular_bottom_block(rng):
    # bottom two rows are zero, so the default partition is singular
    X = np.vstack([rng.standard_normal((3, 10)), np.zeros((2, 10))])
    t = truncate(X, 2)
    uf = unconstrained_factorize(t)
    assert uf.permuted
    assert sorted(uf.row_permutation.tolist()) == list(range(5))
    assert set(uf.row_permutation[-2:].tolist()) <= {0, 1, 2}
    assert np.linalg.norm(uf.reconstruct() - t.matrix) <= 1e-8 * np.linalg.norm(t.matrix)


def test_unconstrained_singular_block_error():
    Xp = np.outer([1.0, 2.0, 3.0], [1.0, 1.0, 2.0])
    t = truncate(Xp, 2)  # the truncation itself only has rank 1
    with pytest.raises(SingularBlock) as exc:
        unconstrained_factorize(t)
    assert exc.value.achieved_rank == 1


def test_unconstrained_wine(wine_X):
    t = truncate(wine_X, 4)
    uf = unconstrained_factorize(t)
    assert np.linalg.norm(uf.reconstruct() - t.matrix) <= 1e-8 * np.linalg.norm(t.matrix)
