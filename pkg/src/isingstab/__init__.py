"""Stability of Ising energy landscapes under parameter perturbation and graph compression."""

from .bounds import (
    StabilityReport,
    best_bound,
    bound_complete_graph,
    bound_graph_structured,
    bound_uniform,
    min_digits,
    order_preservation_threshold,
)
from .compression import (
    CompressionResult,
    TorusGuaranteeQuery,
    build_v0,
    deviation_exact,
    minimum_removed_size,
    removed_size_moments,
    torus_guarantee,
)
from .graphs import Graph, build_complete, build_kings, build_star, build_torus, max_degree
from .hamiltonian import IsingInstance, OracleSizeError, OverlapSets, energy, overlaps, range_exact, v_h
from .perturbation import PerturbationSpec, perturb_uniform, round_off
from .solvers import AnnealerParams, GroundStateResult, anneal_extremes, extremes_1d_torus, ground_state_exact
from .special import chi_square_cdf, gaussian_central_mass

__version__ = "0.1.0"
