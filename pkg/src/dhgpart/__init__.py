"""dhgpart: multi-level partitioning of weighted directed hypergraphs.

Minimizes connectivity (sum of edge weight times spanned partitions minus
one) under two hard limits per partition: the number of original fine nodes
and the number of distinct inbound hyperedges.
"""
from .baselines import one_pass, overlap_greedy
from .coarsen import (
    ClusterMap,
    PairingForest,
    contract,
    coarsen_level,
    match_nodes,
    materialize_neighbors,
    select_candidates,
)
from .driver import Config, RunStats, partition
from .errors import (
    DhgError,
    DhgParseError,
    InfeasibleError,
    MatchingInvariantError,
    OracleSizeError,
)
from .gen import generate_dhg
from .hgraph import (
    Constraints,
    CsrSets,
    Hypergraph,
    Partitioning,
    Violation,
    check_feasibility,
    check_validity,
    connectivity,
    distinct_inbound_sizes,
    load_hypergraph,
    parse_dhg,
    parse_hgr,
    parse_partition,
    partition_sizes,
    write_partition,
)
from .oracles import brute_force_optimal, naive_connectivity, simulate_sequence
from .refine import (
    MoveSet,
    PrefixSelection,
    apply_moves,
    build_events_and_select,
    compute_pins,
    in_sequence_gains,
    project,
    propose_moves,
    refine_level,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Config",
    "Constraints",
    "CsrSets",
    "ClusterMap",
    "DhgError",
    "DhgParseError",
    "Hypergraph",
    "InfeasibleError",
    "MatchingInvariantError",
    "MoveSet",
    "OracleSizeError",
    "PairingForest",
    "Partitioning",
    "PrefixSelection",
    "RunStats",
    "Violation",
    "apply_moves",
    "brute_force_optimal",
    "build_events_and_select",
    "check_feasibility",
    "check_validity",
    "coarsen_level",
    "compute_pins",
    "connectivity",
    "contract",
    "distinct_inbound_sizes",
    "generate_dhg",
    "in_sequence_gains",
    "load_hypergraph",
    "match_nodes",
    "materialize_neighbors",
    "naive_connectivity",
    "one_pass",
    "overlap_greedy",
    "parse_dhg",
    "parse_hgr",
    "parse_partition",
    "partition",
    "partition_sizes",
    "project",
    "propose_moves",
    "refine_level",
    "select_candidates",
    "simulate_sequence",
    "write_partition",
]
