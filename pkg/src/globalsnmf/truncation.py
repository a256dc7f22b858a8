"""Projection-based zeroing: the optimal rank-k reconstruction and its identities."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, InvalidRank, SingularBlock
from .linalg import EigenBasis, as_data_matrix, eigendecompose, numerical_rank, scatter_matrix

CONVENTIONS = ("frobenius", "squared")


@dataclass(frozen=True)
class TruncatedReconstruction:
    matrix: np.ndarray
    rank: int
    retained_eigenvalues: np.ndarray
    discarded_sum: float
    basis: EigenBasis


@dataclass(frozen=True)
class UnconstrainedFactorization:
    """``X_p[row_permutation] == basis @ C`` with ``basis = vstack([A, I_k])``."""

    A: np.ndarray
    basis: np.ndarray
    C: np.ndarray
    row_permutation: np.ndarray

    @property
    def permuted(self) -> bool:
        return bool(np.any(self.row_permutation != np.arange(self.row_permutation.size)))

    def reconstruct(self) -> np.ndarray:
        """Product ``basis @ C`` with the row permutation undone."""
        out = np.empty((self.basis.shape[0], self.C.shape[1]))
        out[self.row_permutation] = self.basis @ self.C
        return out


def _check_rank(k, m):
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= m:
        raise InvalidRank(f"target rank must satisfy 1 <= k <= {m}, got {k!r}")
    return int(k)


def truncate(X, k, basis: EigenBasis | None = None) -> TruncatedReconstruction:
    """Keep the top-k eigen-coordinates of ``X`` and map back.

    With ``H`` the scatter eigenvectors, ``H^T X`` is split into its first
    ``k`` rows ``Y_k`` and the rest; the rest is zeroed and the result is
    rotated back: ``X_p = H[:, :k] @ Y_k``.
    """
    X = as_data_matrix(X)
    m = X.shape[0]
    k = _check_rank(k, m)
    if basis is None:
        basis = eigendecompose(scatter_matrix(X))
    Hk = basis.vectors[:, :k]
    Yk = Hk.T @ X
    Xp = Hk @ Yk
    lam = basis.eigenvalues
    return TruncatedReconstruction(
        matrix=Xp,
        rank=k,
        retained_eigenvalues=lam[:k].copy(),
        discarded_sum=float(lam[k:].sum()),
        basis=basis,
    )


def reconstruction_error(X, Xhat, convention="frobenius") -> float:
    X = np.asarray(X, dtype=np.float64)
    Xhat = np.asarray(Xhat, dtype=np.float64)
    if X.shape != Xhat.shape:
        raise DimensionMismatch(f"shape mismatch: {X.shape} vs {Xhat.shape}")
    sq = float(np.sum((X - Xhat) ** 2))
    if convention == "frobenius":
        return float(np.sqrt(sq))
    if convention == "squared":
        return sq
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def error_decomposition_diagnostic(X, k):
    """Return ``(tail_sum, residual)`` for the zeroing reconstruction.

    ``tail_sum`` is the energy of the discarded projection coefficients,
    ``sum_{i>k} sum_j p_ij^2``; ``residual`` is its absolute gap to the
    directly measured squared error.
    """
    X = as_data_matrix(X)
    k = _check_rank(k, X.shape[0])
    basis = eigendecompose(scatter_matrix(X))
    P = basis.vectors.T @ X
    tail = float(np.sum(P[k:] ** 2))
    measured = reconstruction_error(X, truncate(X, k, basis).matrix, "squared")
    return tail, abs(tail - measured)


def _select_rows(Xp, k):
    m = Xp.shape[0]
    bottom = np.arange(m - k, m)
    if numerical_rank(Xp[bottom]) == k:
        return np.arange(m)
    # column-pivoted QR on the transposed matrix ranks rows by independence
    _, R, piv = scipy.linalg.qr(Xp.T, mode="economic", pivoting=True)
    achieved = numerical_rank(Xp)
    if achieved < k:
        raise SingularBlock(
            f"no selection of {k} rows has full row rank (matrix rank {achieved})",
            achieved_rank=achieved,
        )
    chosen = np.sort(piv[:k])
    if numerical_rank(Xp[chosen]) < k:  # pragma: no cover - QR pivoting is rank revealing
        raise SingularBlock("pivoted row selection is rank deficient", achieved_rank=achieved)
    rest = np.setdiff1d(np.arange(m), chosen)
    return np.concatenate([rest, chosen])


def unconstrained_factorize(trunc: TruncatedReconstruction) -> UnconstrainedFactorization:
    """Factor ``X_p`` as ``(A; I) C`` with no sign constraints.

    The bottom ``k`` rows act as the free coordinates; the top ``m - k`` rows
    are fitted as ``A`` times them.  When the bottom block is rank deficient
    the rows are reordered first (pivoted QR) and the order is reported.
    """
    Xp = trunc.matrix
    m, k = Xp.shape[0], trunc.rank
    perm = _select_rows(Xp, k)
    Z = Xp[perm]
    top, bottom = Z[: m - k], Z[m - k:]
    G = bottom @ bottom.T
    A = np.linalg.solve(G, bottom @ top.T).T
    basis = np.vstack([A, np.eye(k)])
    C = np.linalg.solve(np.eye(k) + A.T @ A, basis.T @ Z)
    return UnconstrainedFactorization(A=A, basis=basis, C=C, row_permutation=perm)
