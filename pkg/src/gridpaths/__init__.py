"""Grid-tiling gadget reduction to edge-disjoint paths on planar DAGs."""

from .digraph import (
    Digraph,
    EmbeddedDigraph,
    EmbeddingCheck,
    GridVertex,
    HConnector,
    NotConnectedError,
    Terminal,
    TreeNode,
    VConnector,
)
from .edp import PathSet, check_edp_solution, edp_to_vdp_dag, solve_edp_dag, solve_vdp_dag
from .errors import BudgetExceededError
from .gridtiling import (
    GTAssignment,
    GridTilingInstance,
    check_gt_solution,
    generate_planted,
    generate_random,
    solve_gt_brute_force,
    validate_instance,
)
from .mappers import (
    ExtractionFailedError,
    InvalidSolutionError,
    check_level_confinement,
    column_path,
    gt_solution_to_paths,
    paths_to_gt_solution,
    row_path,
)
from .reduction import (
    AlreadyReducedError,
    GraphCounts,
    ReductionOutput,
    TerminalSet,
    boundary,
    build_g1,
    level_set,
    predicted_counts,
    reduce,
    reduce_degree,
    split_vertices,
)

__all__ = [
    "AlreadyReducedError",
    "BudgetExceededError",
    "Digraph",
    "EmbeddedDigraph",
    "EmbeddingCheck",
    "ExtractionFailedError",
    "GTAssignment",
    "GraphCounts",
    "GridTilingInstance",
    "GridVertex",
    "HConnector",
    "InvalidSolutionError",
    "NotConnectedError",
    "PathSet",
    "ReductionOutput",
    "Terminal",
    "TerminalSet",
    "TreeNode",
    "VConnector",
    "boundary",
    "build_g1",
    "check_edp_solution",
    "check_gt_solution",
    "check_level_confinement",
    "column_path",
    "edp_to_vdp_dag",
    "generate_planted",
    "generate_random",
    "gt_solution_to_paths",
    "level_set",
    "paths_to_gt_solution",
    "predicted_counts",
    "reduce",
    "reduce_degree",
    "row_path",
    "solve_edp_dag",
    "solve_gt_brute_force",
    "solve_vdp_dag",
    "split_vertices",
    "validate_instance",
]
