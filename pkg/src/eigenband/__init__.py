"""Band-selective amplification of Hermitian eigenpairs.

Phase estimation on an equal-superposition eigenvector register writes
every eigenvalue of H into a phase register, entangled with its
eigenvector; amplitude amplification then boosts the eigenvalues inside a
chosen band [a, b] together with their eigenvectors. Everything is
simulated with dense statevectors and checked against closed-form
predictions from the eigendecomposition.
"""

from .amplify import (
    EigenBand,
    Trajectory,
    build_iterate,
    build_u0_perp,
    build_uf,
    estimate_iterations,
    multi_mark_run_bound,
    run_amplification,
)
from .bounds import cluster_discs, gershgorin_discs, suggest_band
from .linalg import TOL, hermitian_eig, spectral_function
from .oracle import assemble_operator, builtin_operator, predict
from .pea import HermitianOperator, PeaConfig, alpha_overlaps, build_u_pea, eigenvalue_to_index, run_pea
from .qsearch import QSearchConfig, collapse_second_register, run_qsearch
from .statevector import RegisterLayout, StateVector

__all__ = [
    "EigenBand",
    "HermitianOperator",
    "PeaConfig",
    "QSearchConfig",
    "RegisterLayout",
    "StateVector",
    "TOL",
    "Trajectory",
    "alpha_overlaps",
    "assemble_operator",
    "build_iterate",
    "build_u0_perp",
    "build_u_pea",
    "build_uf",
    "cluster_discs",
    "collapse_second_register",
    "eigenvalue_to_index",
    "estimate_iterations",
    "gershgorin_discs",
    "hermitian_eig",
    "multi_mark_run_bound",
    "builtin_operator",
    "predict",
    "run_amplification",
    "run_pea",
    "run_qsearch",
    "spectral_function",
    "suggest_band",
]
