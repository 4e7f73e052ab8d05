"""Vertex connectivity of random uniform hypergraphs: exact tests,
random models, threshold formulas and a reproducible experiment harness."""

from .analytics import (
    exact_degree_pmf,
    exact_expected_deg_count,
    limit_prob_k_connected,
    thresholds,
)
from .connectivity import (
    CutWitness,
    brute_force_is_k_connected,
    check_property_Q,
    connected_components,
    is_k_connected,
    k_connectivity,
    min_separating_cut,
    vertex_connectivity,
)
from .errors import HypergraphError, ScaleGuardError, UnreachableEventError
from .hypergraph import Hypergraph, build, complete, delete_vertices, rank, unrank
from .random_models import Seed, process_stream, sample_gnm, sample_gnp, stopping_times
from .structure import max_quasi_disjoint, min_transversal, quasi_profile

__all__ = [
    "CutWitness", "Hypergraph", "HypergraphError", "ScaleGuardError", "Seed",
    "UnreachableEventError", "brute_force_is_k_connected", "build",
    "check_property_Q", "complete", "connected_components", "delete_vertices",
    "exact_degree_pmf", "exact_expected_deg_count", "is_k_connected",
    "k_connectivity", "limit_prob_k_connected", "max_quasi_disjoint",
    "min_separating_cut", "min_transversal", "process_stream", "quasi_profile",
    "rank", "sample_gnm", "sample_gnp", "stopping_times", "thresholds",
    "unrank", "vertex_connectivity",
]
