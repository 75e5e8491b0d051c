"""Coherence and leader placement in noisy consensus networks.

Computes the steady-state variance of leader-follower consensus under
white-noise disturbances through mutually validating routes (grounded
traces, effective-resistance sums, closed forms, simulation) and solves
the k-leader placement problem exactly at desk scale.
"""

from . import errors
from ._kernels import BACKEND as kernel_backend
from .closed_forms import (
    TreeGeometry,
    TreeOptimum,
    canonical_gap_rotation,
    cycle_leaders_from_gaps,
    cycle_nc_optimal_i,
    cycle_nc_optimal_value,
    cycle_nc_sweep,
    cycle_nc_two_coherence,
    cycle_nc_two_printed_series,
    cycle_nf_coherence,
    cycle_nf_optimal,
    gaps_from_cycle_leaders,
    gaps_from_path_leaders,
    path_leaders_from_gaps,
    path_nf_coherence,
    path_nf_optimal,
    path_nf_round_construction,
    tree_omega,
    tree_optimal_two,
    tree_pair_for_geometry,
    tree_pair_geometry,
    tree_two_leader_coherence,
    valid_tree_geometries,
)
from .coherence import (
    LEADER_FREE,
    NOISE_CORRUPTED,
    NOISE_FREE,
    CoherenceReport,
    best_single_leader,
    coherence_nc,
    coherence_nf,
    leader_free_coherence,
)
from .electrical import (
    AugmentedGraph,
    ResistanceOracle,
    augment_graph,
    edge_addition_update,
    grounded_laplacian,
    path_two_point_resistance,
    resistance,
    resistance_oracle,
    resistance_to_set,
)
from .graphs import (
    Graph,
    PerfectTree,
    build_cycle,
    build_graph,
    build_path,
    build_perfect_tree,
    graph_distance,
    is_connected,
    is_tree,
    laplacian,
    parse_edge_list,
    parse_graph_json,
    read_graph_file,
    write_edge_list,
    write_graph_json,
)
from .selection import (
    CandidateError,
    SelectionResult,
    brute_force_select,
    evaluate_candidates,
)
from .simulate import SimConfig, SimResult, simulate_nc, simulate_nf
from .treegrow import GrowingTree, TrajectoryResult, grow_trajectory, init_growing_tree

__version__ = "0.1.0"

__all__ = [
    "AugmentedGraph",
    "CandidateError",
    "CoherenceReport",
    "Graph",
    "GrowingTree",
    "LEADER_FREE",
    "NOISE_CORRUPTED",
    "NOISE_FREE",
    "PerfectTree",
    "ResistanceOracle",
    "SelectionResult",
    "SimConfig",
    "SimResult",
    "TrajectoryResult",
    "TreeGeometry",
    "TreeOptimum",
    "augment_graph",
    "best_single_leader",
    "brute_force_select",
    "build_cycle",
    "build_graph",
    "build_path",
    "build_perfect_tree",
    "canonical_gap_rotation",
    "coherence_nc",
    "coherence_nf",
    "cycle_leaders_from_gaps",
    "cycle_nc_optimal_i",
    "cycle_nc_optimal_value",
    "cycle_nc_sweep",
    "cycle_nc_two_coherence",
    "cycle_nc_two_printed_series",
    "cycle_nf_coherence",
    "cycle_nf_optimal",
    "edge_addition_update",
    "errors",
    "evaluate_candidates",
    "gaps_from_cycle_leaders",
    "gaps_from_path_leaders",
    "graph_distance",
    "grounded_laplacian",
    "grow_trajectory",
    "init_growing_tree",
    "is_connected",
    "is_tree",
    "kernel_backend",
    "laplacian",
    "leader_free_coherence",
    "parse_edge_list",
    "parse_graph_json",
    "path_leaders_from_gaps",
    "path_nf_coherence",
    "path_nf_optimal",
    "path_nf_round_construction",
    "path_two_point_resistance",
    "read_graph_file",
    "resistance",
    "resistance_oracle",
    "resistance_to_set",
    "simulate_nc",
    "simulate_nf",
    "tree_omega",
    "tree_optimal_two",
    "tree_pair_for_geometry",
    "tree_pair_geometry",
    "tree_two_leader_coherence",
    "valid_tree_geometries",
    "write_edge_list",
    "write_graph_json",
]
