"""Dense matrix primitives and the scatter-matrix spectral machinery.

A data matrix is a plain ``numpy.ndarray`` of float64 with shape ``(m, n)``:
rows are features and columns are samples.  Arrays are stored in numpy's
default C (row-major) layout; ``X[:, j]`` is a cheap strided view.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NotSymmetric, RankDeficient

RANK_RTOL = 1e-9
PSD_RTOL = 1e-10
ORTHO_ATOL = 1e-10


def as_data_matrix(X, name="X") -> np.ndarray:
    """Validate and return ``X`` as a finite, two-dimensional float64 array."""
    A = np.asarray(X, dtype=np.float64)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return A


def rank_tolerance(singular_values) -> float:
    s = np.asarray(singular_values)
    return RANK_RTOL * float(s.max()) if s.size else 0.0


def numerical_rank(M) -> int:
    M = np.asarray(M, dtype=np.float64)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_tolerance(s)))


def affine_dimension(points) -> int:
    """Dimension of the affine hull of the columns of ``points`` (m x p)."""
    P = np.asarray(points, dtype=np.float64)
    if P.shape[1] <= 1:
        return 0
    return numerical_rank(P - P.mean(axis=1, keepdims=True))


@dataclass(frozen=True)
class EigenBasis:
    """Eigenvalues (descending, clamped at zero) and orthonormal eigenvectors.

    ``vectors[:, i]`` is the eigenvector paired with ``eigenvalues[i]``.
    ``tie_flag`` is set when two consecutive eigenvalues coincide within the
    PSD tolerance, in which case the eigenvector order among them is whatever
    the solver produced.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    tie_flag: bool = False

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def scatter_matrix(X) -> np.ndarray:
    """Uncentered scatter matrix ``sum_j x_j x_j^T`` of the sample columns."""
    X = as_data_matrix(X)
    S = X @ X.T
    return 0.5 * (S + S.T)


def _jacobi_eigh(S, max_sweeps=100):
    # cyclic Jacobi rotations; returns unsorted eigenvalues and eigenvectors
    A = np.array(S, dtype=np.float64)
    m = A.shape[0]
    V = np.eye(m)
    scale = max(np.abs(A).max(), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(A, 1) ** 2))
        if off <= 1e-15 * scale:
            return np.diag(A).copy(), V
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                G = np.array([[c, s], [-s, c]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.T @ A[idx, :]
                V[:, idx] = V[:, idx] @ G
    raise ConvergenceFailure(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def eigendecompose(S, method="lapack") -> EigenBasis:
    """Diagonalize a symmetric positive semidefinite matrix.

    ``method`` is ``"lapack"`` (``numpy.linalg.eigh``) or ``"jacobi"`` (cyclic
    Jacobi rotations).  Eigenvalues come back sorted descending; each
    eigenvector is signed so that its largest-magnitude entry (lowest index on
    ties) is positive.  Eigenvalues slightly below zero are clamped; anything
    below ``-1e-10 * max(lambda_1, 1)`` raises.
    """
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise ValueError("matrix contains NaN or Inf entries")
    norm = np.abs(S).max() if S.size else 0.0
    if np.abs(S - S.T).max() > 1e-10 * max(norm, 1.0):
        raise NotSymmetric("matrix is not symmetric within 1e-10 relative")
    S = 0.5 * (S + S.T)

    if method == "lapack":
        try:
            w, V = np.linalg.eigh(S)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise ConvergenceFailure(str(exc)) from exc
    elif method == "jacobi":
        w, V = _jacobi_eigh(S)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")

    order = np.argsort(-w, kind="stable")
    w = w[order]
    V = V[:, order]

    tau = PSD_RTOL * max(float(w[0]), 1.0)
    if w[-1] < -tau:
        raise ValueError(f"matrix is not positive semidefinite: eigenvalue {w[-1]:.3e}")
    w = np.where(w < 0.0, 0.0, w)

    pivots = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivots, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    V = V * signs

    tie = bool(np.any(np.diff(w) >= -tau)) if w.size > 1 else False
    return EigenBasis(eigenvalues=w, vectors=V, tie_flag=tie)


def projections(X, basis: EigenBasis) -> np.ndarray:
    """Coordinates ``P = H^T X`` of every sample in the eigenbasis."""
    X = as_data_matrix(X)
    if basis.vectors.shape[0] != X.shape[0]:
        raise DimensionMismatch(
            f"basis has dimension {basis.vectors.shape[0]} but X has {X.shape[0]} rows"
        )
    return basis.vectors.T @ X


def pseudo_solve(W, B) -> np.ndarray:
    """Least-squares coefficients ``H = (W^T W)^{-1} W^T B``.

    Computed through the SVD of ``W``; raises :class:`RankDeficient` when the
    smallest singular value is at or below ``1e-9`` times the largest.
    """
    W = as_data_matrix(W, "W")
    B = as_data_matrix(B, "B")
    if W.shape[0] != B.shape[0]:
        raise DimensionMismatch(f"W has {W.shape[0]} rows but B has {B.shape[0]}")
    U, s, Vt = np.linalg.svd(W, full_matrices=False)
    ratio = float(s[-1] / s[0]) if s[0] > 0 else 0.0
    if s[0] == 0.0 or s[-1] <= rank_tolerance(s):
        raise RankDeficient(
            f"W is rank deficient: smallest/largest singular value ratio {ratio:.3e} "
            f"(threshold {RANK_RTOL:.0e})",
            ratio=ratio,
        )
    return Vt.T @ ((U.T @ B) / s[:, None])
