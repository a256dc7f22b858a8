"""Iterative comparison methods: Lee-Seung multiplicative NMF and Ding-style semi-NMF."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidRank, NegativeInput, RankDeficient
from .linalg import as_data_matrix


@dataclass(frozen=True)
class IterativeConfig:
    max_iterations: int = 2000
    tolerance: float = 1e-9
    restarts: int = 5
    seed: int = 0
    epsilon_guard: float = 1e-12
    patience: int = 10  # consecutive small-change iterations required to stop

    def __post_init__(self):
        for name in ("max_iterations", "tolerance", "restarts", "epsilon_guard", "patience"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class IterativeResult:
    W: np.ndarray
    H: np.ndarray
    objective: float
    iterations: int
    history: np.ndarray  # squared error after initialization and each iteration
    restart: int


def restart_rngs(config: IterativeConfig):
    """One independent PCG64 generator per restart, derived from ``config.seed``."""
    children = np.random.SeedSequence(config.seed).spawn(config.restarts)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def _objective(X, W, H):
    R = X - W @ H
    return float(np.einsum("ij,ij->", R, R))


def _converged(history, config, streak):
    prev, cur = history[-2], history[-1]
    change = abs(prev - cur) / max(abs(prev), np.finfo(float).tiny)
    streak = streak + 1 if change < config.tolerance else 0
    return streak >= config.patience, streak


def _check_k(X, k):
    m, n = X.shape
    if not isinstance(k, (int, np.integer)) or k < 1 or k > min(m, n):
        raise InvalidRank(f"rank must satisfy 1 <= k <= min(m, n) = {min(m, n)}, got {k!r}")
    return int(k)


def _nmf_run(X, k, rng, config):
    m, n = X.shape
    scale = X.mean()
    W = rng.random((m, k)) * scale
    H = rng.random((k, n)) * scale
    eps = config.epsilon_guard
    history = [_objective(X, W, H)]
    streak = 0
    it = 0
    for it in range(1, config.max_iterations + 1):
        H *= (W.T @ X) / (W.T @ W @ H + eps)
        W *= (X @ H.T) / (W @ (H @ H.T) + eps)
        history.append(_objective(X, W, H))
        done, streak = _converged(history, config, streak)
        if done:
            break
    return W, H, it, np.array(history)


def nmf_multiplicative(X, k, config: IterativeConfig | None = None) -> IterativeResult:
    """Frobenius NMF by multiplicative updates, best of ``config.restarts`` runs.

    Uses the Lee-Seung rules ``H <- H * (W^T X) / (W^T W H)`` and
    ``W <- W * (X H^T) / (W H H^T)``; both factors start uniform on
    ``(0, mean(X))``.
    """
    config = config or IterativeConfig()
    X = as_data_matrix(X)
    if np.any(X < 0):
        raise NegativeInput("NMF requires an entrywise nonnegative matrix")
    k = _check_k(X, k)
    best = None
    for r, rng in enumerate(restart_rngs(config)):
        W, H, it, hist = _nmf_run(X, k, rng, config)
        res = IterativeResult(W=W, H=H, objective=float(hist[-1]), iterations=it, history=hist, restart=r)
        if best is None or res.objective < best.objective:
            best = res
    return best


def _pos(M):
    return (np.abs(M) + M) / 2.0


def _neg(M):
    return (np.abs(M) - M) / 2.0


def _solve_basis(X, H, eps):
    G = H @ H.T
    k = G.shape[0]
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > 1e12:
        G = G + eps * max(np.trace(G) / k, 1.0) * np.eye(k)
        if not np.isfinite(np.linalg.cond(G)):
            raise RankDeficient("H H^T is singular even after regularization")
    return np.linalg.solve(G, H @ X.T).T


def _seminmf_run(X, k, rng, config):
    n = X.shape[1]
    eps = config.epsilon_guard
    H = rng.random((k, n)) + 0.2
    W = _solve_basis(X, H, eps)
    history = [_objective(X, W, H)]
    streak = 0
    it = 0
    for it in range(1, config.max_iterations + 1):
        WtX = W.T @ X
        WtW = W.T @ W
        num = _pos(WtX) + _neg(WtW) @ H
        den = _neg(WtX) + _pos(WtW) @ H + eps
        H = H * np.sqrt(num / den)
        W = _solve_basis(X, H, eps)
        history.append(_objective(X, W, H))
        done, streak = _converged(history, config, streak)
        if done:
            break
    return W, H, it, np.array(history)


def seminmf_iterative(X, k, config: IterativeConfig | None = None) -> IterativeResult:
    """Alternating semi-NMF: least-squares basis, square-root multiplicative ``H`` update.

    ``W <- X H^T (H H^T)^{-1}`` followed by
    ``H <- H * sqrt(((W^T X)^+ + (W^T W)^- H) / ((W^T X)^- + (W^T W)^+ H))``
    where ``M^+`` and ``M^-`` are the positive and negative parts.  ``H``
    starts uniform on ``(0.2, 1.2)``.
    """
    config = config or IterativeConfig()
    X = as_data_matrix(X)
    k = _check_k(X, k)
    best = None
    for r, rng in enumerate(restart_rngs(config)):
        W, H, it, hist = _seminmf_run(X, k, rng, config)
        res = IterativeResult(W=W, H=H, objective=float(hist[-1]), iterations=it, history=hist, restart=r)
        if best is None or res.objective < best.objective:
            best = res
    return best
