"""Uniform entry point over the closed-form semi-NMF and the comparison methods."""
from __future__ import annotations

from dataclasses import dataclass, field
import enum

import numpy as np

from .baselines import IterativeConfig, nmf_multiplicative, seminmf_iterative
from .cone import NONNEG_RTOL, ConeBasis, generate_basis
from .errors import InvalidRank, NonPositiveRay, RankCollapse
from .linalg import as_data_matrix, eigendecompose, numerical_rank, pseudo_solve, scatter_matrix
from .truncation import truncate, unconstrained_factorize


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form_seminmf"
    NMF = "nmf_multiplicative"
    SEMINMF_ITERATIVE = "seminmf_iterative"
    UNCONSTRAINED = "unconstrained"

    @classmethod
    def parse(cls, value) -> "Method":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise ValueError(
                f"unknown method {value!r}; expected one of {[m.value for m in cls]}"
            ) from None


NONNEGATIVE_H = {Method.CLOSED_FORM, Method.NMF, Method.SEMINMF_ITERATIVE}


@dataclass(frozen=True)
class ClosedFormOptions:
    """``fallback`` controls what happens when the cone construction cannot
    proceed: the origin apex failing to see a column through the first
    hyperplane (a column orthogonal to the largest one), or the mixed-sign
    apex collapsing because the columns span only an affine hyperplane.  When
    set, the construction is retried with the mixed-sign apex over the
    columns plus the origin; otherwise the error propagates."""

    apex_offset: float = 0.01
    eigensolver: str = "lapack"
    fallback: bool = True


@dataclass(frozen=True)
class Factorization:
    method: Method
    W: np.ndarray
    H: np.ndarray
    error: float
    error_squared: float
    min_H_entry: float
    iterations_used: int = 0
    seed: int | None = None
    history: np.ndarray | None = field(default=None, repr=False)
    cone: ConeBasis | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return self.W.shape[1]

    def nonnegativity_threshold(self) -> float:
        return NONNEG_RTOL * float(np.abs(self.H).max())


def package(X, method, W, H, *, iterations=0, seed=None, history=None, cone=None) -> Factorization:
    """Bundle factors with recomputed error metrics."""
    R = X - W @ H
    sq = float(np.einsum("ij,ij->", R, R))
    return Factorization(
        method=Method.parse(method),
        W=W,
        H=H,
        error=float(np.sqrt(sq)),
        error_squared=sq,
        min_H_entry=float(H.min()),
        iterations_used=int(iterations),
        seed=seed,
        history=history,
        cone=cone,
    )


def closed_form_seminmf(X, k, options: ClosedFormOptions | None = None) -> Factorization:
    """Non-iterative semi-NMF attaining the rank-k optimum.

    Truncate ``X`` to its top-k scatter eigen-coordinates, build a cone basis
    ``W`` around the truncated columns and solve ``H = (W^T W)^{-1} W^T X_p``.
    """
    options = options or ClosedFormOptions()
    X = as_data_matrix(X)
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidRank(f"rank must be a positive integer, got {k!r}")
    r = numerical_rank(X)
    if k > r:
        raise InvalidRank(f"target rank {k} exceeds the numerical rank {r} of X")
    basis = eigendecompose(scatter_matrix(X), method=options.eigensolver)
    trunc = truncate(X, int(k), basis)
    try:
        cone = generate_basis(X, trunc, apex_offset=options.apex_offset)
    except (NonPositiveRay, RankCollapse):
        if not options.fallback:
            raise
        cone = generate_basis(X, trunc, apex_offset=options.apex_offset,
                              force_mixed=True, include_origin=True)
    H = pseudo_solve(cone.W, trunc.matrix)
    return package(X, Method.CLOSED_FORM, cone.W, H, cone=cone)


def _unconstrained(X, k):
    X = as_data_matrix(X)
    uf = unconstrained_factorize(truncate(X, k))
    W = np.empty_like(uf.basis)
    W[uf.row_permutation] = uf.basis
    return package(X, Method.UNCONSTRAINED, W, uf.C)


def factorize(X, k, method=Method.CLOSED_FORM, *, config: IterativeConfig | None = None,
              options: ClosedFormOptions | None = None) -> Factorization:
    method = Method.parse(method)
    X = as_data_matrix(X)
    if method is Method.CLOSED_FORM:
        return closed_form_seminmf(X, k, options)
    if method is Method.UNCONSTRAINED:
        return _unconstrained(X, k)
    config = config or IterativeConfig()
    run = nmf_multiplicative if method is Method.NMF else seminmf_iterative
    res = run(X, k, config)
    return package(X, method, res.W, res.H, iterations=res.iterations, seed=config.seed,
                   history=res.history)
