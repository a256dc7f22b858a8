"""Cone basis construction for the closed-form semi-NMF.

Given the rank-k reconstruction ``X_p``, pick ``k`` vertices ``v_1 .. v_k`` and
an apex ``v_0`` such that every column of ``X_p`` is a nonnegative combination
of ``v_i - v_0``.  The construction repeatedly takes the farthest pair of the
current point set, uses one end as a projection centre and the other as the
anchor of a hyperplane, and projects the remaining points along rays onto that
hyperplane.  Each stage lowers the affine dimension of the point set by one
until it is a segment, whose two ends become the last two vertices.

Because ``(a, b)`` is a diameter pair, any point ``p`` of the set satisfies
``(b - a) . (p - a) >= |p - a|^2 / 2``, so rays from ``a`` always reach the
hyperplane and land beyond (or on) the original point.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidRank,
    NegativeInput,
    NonPositiveRay,
    RankCollapse,
    RankDeficient,
)
from .linalg import affine_dimension, as_data_matrix, numerical_rank, pseudo_solve
from .truncation import TruncatedReconstruction

TIE_RTOL = 1e-9
RAY_TOL = 1e-12
NONNEG_RTOL = 1e-6
APEX_RTOL = 1e-9


@dataclass(frozen=True)
class Stage:
    """One point set ``X^(t)`` of the construction.

    ``source`` maps each column of ``points`` back to the column of ``X_p`` it
    was projected from.  ``pair`` is the selected (smaller-norm, larger-norm)
    pair as column indices into ``points``; it is ``None`` for the initial
    stage of the nonnegative branch, which uses the largest-norm column only.
    """

    points: np.ndarray
    source: np.ndarray
    affine_dim: int
    pair: tuple[int, int] | None = None
    distance: float | None = None


@dataclass(frozen=True)
class VertexSet:
    apex: np.ndarray
    vertices: np.ndarray  # (m, k), column i is v_{i+1}
    stages: tuple[Stage, ...] = ()
    tie_flag: bool = False


@dataclass(frozen=True)
class ConeBasis:
    W: np.ndarray
    vertex_set: VertexSet
    mode: str  # "nonnegative" or "mixed"
    with_origin: bool = False

    @property
    def rank(self) -> int:
        return self.W.shape[1]


@dataclass(frozen=True)
class ContainmentReport:
    min_coefficient: float
    violating_columns: tuple[int, ...]
    threshold: float
    H: np.ndarray = field(repr=False)
    affine_min_coefficient: float = 0.0

    @property
    def contained(self) -> bool:
        return not self.violating_columns


def _as_points(points) -> np.ndarray:
    if isinstance(points, np.ndarray) and points.ndim == 2:
        return np.asarray(points, dtype=np.float64)
    cols = [np.asarray(p, dtype=np.float64).ravel() for p in points]
    if not cols:
        return np.empty((0, 0))
    return np.column_stack(cols)


def max_distance_pair(points):
    """Farthest pair among the columns of ``points``.

    Returns ``(i_small, i_large, distance, tie_flag)`` where ``i_small`` is the
    member with the smaller norm (lower index if the norms are equal).  Exact
    ties in distance go to the lexicographically smallest index pair;
    ``tie_flag`` reports whether any other pair comes within ``1e-9`` times
    the maximum distance.
    """
    P = _as_points(points)
    p = P.shape[1] if P.ndim == 2 else 0
    if p < 2:
        raise ValueError(f"need at least 2 points, got {p}")
    diff = P[:, :, None] - P[:, None, :]
    D = np.sqrt(np.einsum("mij,mij->ij", diff, diff))
    iu, ju = np.triu_indices(p, 1)
    d = D[iu, ju]
    best = int(np.argmax(d))
    dmax = float(d[best])
    tie = bool(np.count_nonzero(d >= dmax - TIE_RTOL * dmax) > 1)
    i, j = int(iu[best]), int(ju[best])
    ni, nj = np.linalg.norm(P[:, i]), np.linalg.norm(P[:, j])
    if nj < ni:
        i, j = j, i
    return i, j, dmax, tie


def ray_hyperplane_project(apex, target, points):
    """Project ``points`` along rays from ``apex`` onto the hyperplane through
    ``target`` orthogonal to ``target - apex``.

    Returns ``(projected, kept)``: the projected points as columns and the
    indices of the input points they came from.  Points coinciding with the
    apex are dropped.  Raises :class:`NonPositiveRay` for points whose ray
    never reaches the hyperplane.
    """
    apex = np.asarray(apex, dtype=np.float64).ravel()
    target = np.asarray(target, dtype=np.float64).ravel()
    P = _as_points(points)
    if P.shape[0] != apex.size or target.size != apex.size:
        raise DimensionMismatch("apex, target and points must share a dimension")
    d = target - apex
    dn = float(np.linalg.norm(d))
    if dn <= APEX_RTOL * max(np.abs(target).max(initial=0.0), np.abs(apex).max(initial=0.0)) or dn == 0.0:
        raise RankDeficient("hyperplane normal is degenerate: target coincides with apex")
    rel = P - apex[:, None]
    rn = np.linalg.norm(rel, axis=0)
    keep = rn > APEX_RTOL * dn
    s = d @ rel
    bad = np.flatnonzero(keep & ~(s > RAY_TOL * dn * rn))
    if bad.size:
        raise NonPositiveRay(
            f"{bad.size} point(s) cannot reach the hyperplane from the apex: {bad.tolist()}",
            indices=bad.tolist(),
        )
    kept = np.flatnonzero(keep)
    scale = dn * dn / s[kept]
    return apex[:, None] + rel[:, kept] * scale, kept


def generate_basis(X, trunc: TruncatedReconstruction, apex_offset=0.01,
                   force_mixed=False, include_origin=False) -> ConeBasis:
    """Build the cone basis ``W = [v_1 - v_0, ..., v_k - v_0]`` for ``trunc.matrix``.

    For entrywise nonnegative ``X`` the apex is the origin and the first
    anchor is the largest-norm column.  Otherwise (or with ``force_mixed``)
    the apex sits just outside the smaller-norm end of the farthest pair,
    displaced by ``apex_offset`` times the pair's separation.

    ``include_origin`` appends the zero vector to the initial point set; its
    stage ``source`` index is ``n``.  In the mixed branch this is what makes
    ``W`` full rank when the columns of ``X_p`` span only an affine
    hyperplane (the identity matrix, for instance).
    """
    X = as_data_matrix(X)
    Xp = as_data_matrix(trunc.matrix, "X_p")
    k = trunc.rank
    m = Xp.shape[0]
    r = numerical_rank(Xp)
    if r != k:
        raise InvalidRank(f"X_p has numerical rank {r}, expected {k}")
    if include_origin:
        Xp = np.hstack([Xp, np.zeros((m, 1))])

    tie = False
    stages = []
    nonneg = bool(np.all(X >= 0)) and not force_mixed
    if nonneg:
        mode = "nonnegative"
        v0 = np.zeros(m)
        j = int(np.argmax(np.linalg.norm(Xp, axis=0)))
        v_temp = Xp[:, j]
        stages.append(Stage(points=Xp, source=np.arange(Xp.shape[1]), affine_dim=k, pair=None))
    else:
        mode = "mixed"
        a, b, dist, tie = max_distance_pair(Xp)
        v0 = Xp[:, a] - apex_offset * (Xp[:, b] - Xp[:, a])
        v_temp = Xp[:, b]
        stages.append(
            Stage(points=Xp, source=np.arange(Xp.shape[1]), affine_dim=k, pair=(a, b), distance=dist)
        )

    if k == 1:
        vertices = v_temp[:, None].copy()
        vs = VertexSet(apex=v0, vertices=vertices, stages=tuple(stages), tie_flag=tie)
        return ConeBasis(W=vertices - v0[:, None], vertex_set=vs, mode=mode, with_origin=include_origin)

    current, kept = ray_hyperplane_project(v0, v_temp, Xp)
    source = kept
    dim = affine_dimension(current)
    if dim != k - 1:
        raise RankCollapse(f"first projection left affine dimension {dim}, expected {k - 1}")

    found = []
    while dim > 1:
        a, b, dist, t_tie = max_distance_pair(current)
        tie = tie or t_tie
        stages.append(Stage(points=current, source=source, affine_dim=dim, pair=(a, b), distance=dist))
        v_t, v_temp = current[:, a], current[:, b]
        found.append(v_t)
        rest = np.delete(current, a, axis=1)
        rest_src = np.delete(source, a)
        current, kept = ray_hyperplane_project(v_t, v_temp, rest)
        source = rest_src[kept]
        new_dim = affine_dimension(current) if current.shape[1] else -1
        if new_dim != dim - 1:
            raise RankCollapse(
                f"projection stage {len(stages) - 1} took affine dimension {dim} to {new_dim}"
            )
        dim = new_dim

    a, b, dist, t_tie = max_distance_pair(current)
    tie = tie or t_tie
    stages.append(Stage(points=current, source=source, affine_dim=dim, pair=(a, b), distance=dist))
    found.extend([current[:, a], current[:, b]])

    vertices = np.column_stack(found)
    W = vertices - v0[:, None]
    if numerical_rank(W) != k:
        raise RankCollapse(f"basis has rank {numerical_rank(W)}, expected {k}")
    vs = VertexSet(apex=v0, vertices=vertices, stages=tuple(stages), tie_flag=tie)
    return ConeBasis(W=W, vertex_set=vs, mode=mode, with_origin=include_origin)


def _check_nonnegative(Xp):
    tol = 1e-12 * max(np.abs(Xp).max(), 1.0)
    if np.any(Xp < -tol):
        raise NegativeInput("matrix has negative entries")


def theorem4_rank1(Xp):
    """Explicit rank-1 nonnegative factorization ``Xp = w h^T``.

    ``w`` is the largest-norm column (lowest index on ties) and
    ``h_j = |x_j| / |w|``.
    """
    Xp = as_data_matrix(Xp, "X_p")
    r = numerical_rank(Xp)
    if r != 1:
        raise InvalidRank(f"expected a rank-1 matrix, got rank {r}")
    _check_nonnegative(Xp)
    norms = np.linalg.norm(Xp, axis=0)
    j = int(np.argmax(norms))
    w = Xp[:, j].copy()
    return w, norms / norms[j]


def theorem4_rank2(Xp):
    """Explicit rank-2 nonnegative factorization from the widest column pair.

    Returns ``(W, C)`` with ``W`` the two columns enclosing the largest angle
    (lowest index pair on ties, zero columns ignored) and ``C`` the
    least-squares coefficients, which are nonnegative because every column
    sits inside the sector they span.
    """
    Xp = as_data_matrix(Xp, "X_p")
    norms = np.linalg.norm(Xp, axis=0)
    if not np.any(norms > 0):
        raise InvalidRank("all columns are zero")
    r = numerical_rank(Xp)
    if r != 2:
        raise InvalidRank(f"expected a rank-2 matrix, got rank {r}")
    _check_nonnegative(Xp)
    nz = np.flatnonzero(norms > 1e-12 * norms.max())
    U = Xp[:, nz] / norms[nz]
    ang = np.arccos(np.clip(U.T @ U, -1.0, 1.0))
    iu, ju = np.triu_indices(nz.size, 1)
    best = int(np.argmax(ang[iu, ju]))
    i, j = nz[iu[best]], nz[ju[best]]
    W = Xp[:, [i, j]].copy()
    return W, pseudo_solve(W, Xp)


def check_cone_containment(W, v0, Xp) -> ContainmentReport:
    """Coefficients of ``Xp`` in the basis ``W`` and the columns leaving the cone.

    A column violates containment when one of its coefficients falls below
    ``-1e-6 * max|H|``.  The report also carries the smallest coefficient of
    the apex-shifted points ``Xp - v0``.
    """
    W = as_data_matrix(W, "W")
    Xp = as_data_matrix(Xp, "X_p")
    v0 = np.zeros(W.shape[0]) if v0 is None else np.asarray(v0, dtype=np.float64).ravel()
    H = pseudo_solve(W, Xp)
    Ha = pseudo_solve(W, Xp - v0[:, None])
    tau = NONNEG_RTOL * float(np.abs(H).max())
    bad = np.flatnonzero(np.any(H < -tau, axis=0))
    return ContainmentReport(
        min_coefficient=float(H.min()),
        violating_columns=tuple(int(c) for c in bad),
        threshold=tau,
        H=H,
        affine_min_coefficient=float(Ha.min()),
    )
