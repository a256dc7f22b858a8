"""Closed-form, globally optimal semi-NMF with NMF and iterative semi-NMF baselines."""
from .baselines import IterativeConfig, nmf_multiplicative, seminmf_iterative
from .cone import (
    ConeBasis,
    VertexSet,
    check_cone_containment,
    generate_basis,
    max_distance_pair,
    ray_hyperplane_project,
    theorem4_rank1,
    theorem4_rank2,
)
from .data import LabeledDataset, load_wine, read_matrix, synthetic_nonnegative, write_matrix
from .errors import *  # noqa: F401,F403
from .factorize import ClosedFormOptions, Factorization, Method, closed_form_seminmf, factorize
from .linalg import EigenBasis, eigendecompose, projections, pseudo_solve, scatter_matrix
from .truncation import (
    TruncatedReconstruction,
    UnconstrainedFactorization,
    error_decomposition_diagnostic,
    reconstruction_error,
    truncate,
    unconstrained_factorize,
)

__version__ = "0.1.0"
