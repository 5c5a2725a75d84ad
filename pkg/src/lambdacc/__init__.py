"""LambdaCC: correlation clustering with a resolution parameter lambda."""

from .graph import (
    Clustering,
    DomainError,
    Graph,
    GraphParseError,
    cluster_statistics,
    max_scaled_cut,
    parse_edge_list,
    read_edge_list,
    set_statistics,
    write_edge_list,
)
from .heuristics import HeuristicParams, grow_clique, grow_cluster, lambda_louvain
from .lp import FractionalSolution, LpNonConvergence, LpProblem, LpTooLarge, lp_bound, solve_cc_lp
from .objective import (
    LambdaConfig,
    SignedInstance,
    WeightMode,
    adjusted_rand_index,
    cluster_deletion_cost,
    hamiltonian,
    lambda_cc_cost,
    modularity,
)
from .oracle import OracleRefusal, brute_force_cluster_deletion, brute_force_lambda_cc, min_scaled_sparsest_cut
from .rounding import GuaranteeOutOfRange, PivotStrategy, cc_pivot, five_lp, four_cd, pivot, three_lp, two_cd

__version__ = "0.1.0"

__all__ = [
    "Clustering",
    "DomainError",
    "FractionalSolution",
    "Graph",
    "GraphParseError",
    "GuaranteeOutOfRange",
    "HeuristicParams",
    "LambdaConfig",
    "LpNonConvergence",
    "LpProblem",
    "LpTooLarge",
    "OracleRefusal",
    "PivotStrategy",
    "SignedInstance",
    "WeightMode",
    "adjusted_rand_index",
    "brute_force_cluster_deletion",
    "brute_force_lambda_cc",
    "cc_pivot",
    "cluster_deletion_cost",
    "cluster_statistics",
    "five_lp",
    "four_cd",
    "grow_clique",
    "grow_cluster",
    "hamiltonian",
    "lambda_cc_cost",
    "lambda_louvain",
    "lp_bound",
    "max_scaled_cut",
    "min_scaled_sparsest_cut",
    "modularity",
    "parse_edge_list",
    "pivot",
    "read_edge_list",
    "set_statistics",
    "solve_cc_lp",
    "three_lp",
    "two_cd",
    "write_edge_list",
]
