"""Exact moments and log-asymptotic growth constants of the Ulam-Kac adder."""

from .combinatorics import CanonicalBasis, MomentIndex, Multiset, canonical_basis, partitions, position_subsets
from .gf_pipeline import decompose, evaluate_R
from .pathspace import SimConfig, enumerate_distribution, exact_moment_oracle, min_star_chain_length, simulate
from .recurrence import build_coefficient_matrices, exact_moments
from .spectral import is_primitive, moment_constant, perron_eigenvalue

__all__ = [
    "CanonicalBasis", "MomentIndex", "Multiset", "SimConfig",
    "build_coefficient_matrices", "canonical_basis", "decompose", "enumerate_distribution",
    "evaluate_R", "exact_moment_oracle", "exact_moments", "is_primitive", "min_star_chain_length",
    "moment_constant", "partitions", "perron_eigenvalue", "position_subsets", "simulate",
]
