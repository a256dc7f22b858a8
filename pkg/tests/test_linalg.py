import numpy as np
import pytest

from globalsnmf.errors import DimensionMismatch, NotSymmetric, RankDeficient
from globalsnmf.linalg import (
    affine_dimension,
    eigendecompose,
    numerical_rank,
    projections,
    pseudo_solve,
    scatter_matrix,
)


def test_scatter_identity():
    np.testing.assert_array_equal(scatter_matrix(np.eye(2)), np.eye(2))


def test_scatter_two_columns():
    X = np.array([[1.0, 2.0], [0.0, 1.0]])
    np.testing.assert_array_equal(scatter_matrix(X), [[5.0, 2.0], [2.0, 1.0]])


def test_scatter_trace_is_frobenius_energy(rng):
    X = rng.standard_normal((3, 5))
    S = scatter_matrix(X)
    frob = sum(X[i, j] ** 2 for i in range(3) for j in range(5))
    assert abs(np.trace(S) - frob) <= 1e-12 * frob
    np.testing.assert_array_equal(S, S.T)


def test_scatter_rejects_nan():
    with pytest.raises(ValueError):
        scatter_matrix(np.array([[1.0, np.nan]]))


def test_eigendecompose_diagonal():
    b = eigendecompose(np.diag([9.0, 1.0]))
    np.testing.assert_allclose(b.eigenvalues, [9.0, 1.0])
    np.testing.assert_allclose(b.vectors, np.eye(2), atol=1e-15)


def test_eigendecompose_sorts_descending():
    b = eigendecompose(np.diag([1.0, 9.0, 4.0]))
    np.testing.assert_allclose(b.eigenvalues, [9.0, 4.0, 1.0])
    np.testing.assert_allclose(np.abs(b.vectors), np.eye(3)[:, [1, 2, 0]], atol=1e-15)


def test_eigendecompose_zero_matrix():
    b = eigendecompose(np.zeros((2, 2)))
    np.testing.assert_array_equal(b.eigenvalues, [0.0, 0.0])
    np.testing.assert_allclose(b.vectors.T @ b.vectors, np.eye(2), atol=1e-12)
    assert b.tie_flag


def test_eigendecompose_trace_and_eigenpairs(rng):
    X = rng.standard_normal((6, 15))
    S = scatter_matrix(X)
    b = eigendecompose(S)
    fro2 = float(np.sum(X * X))
    assert abs(b.eigenvalues.sum() - fro2) <= 1e-10 * fro2
    resid = S @ b.vectors - b.vectors * b.eigenvalues
    assert np.abs(resid).max() <= 1e-8 * b.eigenvalues[0]
    assert np.abs(b.vectors.T @ b.vectors - np.eye(6)).max() <= 1e-10


def test_sign_convention(rng):
    b = eigendecompose(scatter_matrix(rng.standard_normal((5, 9))))
    for i in range(5):
        v = b.vectors[:, i]
        assert v[np.argmax(np.abs(v))] > 0


def test_eigendecompose_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        eigendecompose(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_eigendecompose_rejects_indefinite():
    with pytest.raises(ValueError):
        eigendecompose(np.diag([1.0, -1.0]))


def test_eigendecompose_clamps_tiny_negative():
    b = eigendecompose(np.diag([1.0, -1e-14]))
    assert b.eigenvalues[-1] == 0.0


def test_jacobi_matches_lapack(rng):
    S = scatter_matrix(rng.standard_normal((7, 12)))
    a = eigendecompose(S, method="lapack")
    j = eigendecompose(S, method="jacobi")
    np.testing.assert_allclose(j.eigenvalues, a.eigenvalues, rtol=1e-10, atol=1e-12 * a.eigenvalues[0])
    np.testing.assert_allclose(j.vectors, a.vectors, atol=1e-8)


def test_projections_identity():
    X = np.arange(6.0).reshape(2, 3)
    b = eigendecompose(np.diag([2.0, 1.0]))
    np.testing.assert_array_equal(projections(X, b), X)


def test_projections_gram_identity(rng):
    X = rng.standard_normal((4, 10))
    b = eigendecompose(scatter_matrix(X))
    P = projections(X, b)
    assert np.abs(P @ P.T - np.diag(b.eigenvalues)).max() <= 1e-8 * b.eigenvalues[0]
    assert np.linalg.norm(b.vectors @ P - X) <= 1e-10 * np.linalg.norm(X)


def test_projections_dimension_mismatch():
    b = eigendecompose(np.eye(3))
    with pytest.raises(DimensionMismatch):
        projections(np.ones((2, 4)), b)


def test_pseudo_solve_identity_prefix(rng):
    X = rng.standard_normal((5, 4))
    H = pseudo_solve(np.eye(5)[:, :3], X)
    np.testing.assert_allclose(H, X[:3], atol=1e-14)


def test_pseudo_solve_square(rng):
    W = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    B = rng.standard_normal((4, 6))
    np.testing.assert_allclose(pseudo_solve(W, B), np.linalg.solve(W, B), atol=1e-12)


def test_pseudo_solve_recovers_known_coefficients():
    gen = np.random.default_rng(3)
    W = gen.standard_normal((5, 3))
    H0 = gen.standard_normal((3, 8))
    np.testing.assert_allclose(pseudo_solve(W, W @ H0), H0, atol=1e-8)


def test_pseudo_solve_rank_deficient():
    W = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    with pytest.raises(RankDeficient) as exc:
        pseudo_solve(W, np.ones((3, 1)))
    assert exc.value.ratio < 1e-9
    assert "ratio" in str(exc.value)


def test_numerical_rank_and_affine_dimension():
    assert numerical_rank(np.outer([1, 2, 3], [1, 1])) == 1
    pts = np.array([[0.0, 1.0, 2.0], [1.0, 1.0, 1.0]])  # collinear, off origin
    assert numerical_rank(pts) == 2
    assert affine_dimension(pts) == 1
    assert affine_dimension(pts[:, :1]) == 0
