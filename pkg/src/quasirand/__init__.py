"""Quasi-randomness testing for graphs via induced-pattern statistics.

The package measures how close a graph's induced-subgraph distribution sits
to that of a random graph with a given density, recovers the per-pair edge
densities of a weighted complete graph from its placement products through
an inclusion-matrix linear system, and verifies the supporting combinatorial
facts exhaustively at small scale.  See the README for the CLI.
"""

__version__ = "0.1.0"

from ._kernels import backend
from .graphs import (
    Graph,
    GraphFormatError,
    WeightedCompleteGraph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    edge_count_between,
    edge_count_within,
    empty_graph,
    generate_counterexample,
    generate_gnp,
    hub_weighted,
    path_graph,
    read_graph,
    read_weighted,
    two_block_graph,
    write_graph,
    write_weighted,
)
from .patterns import PatternGraph, clique, cycle, cycle4, empty, parse_pattern, path, path3, star
from .counting import (
    count_induced,
    count_induced_phi,
    count_induced_sigma,
    count_labeled,
    count_labeled_tuple,
    weighted_product,
)
from .quasirandom import (
    DensityPair,
    PropertyDeviation,
    PropertyKind,
    SampleBudget,
    check_p1,
    check_p2,
    check_p3,
    check_p4,
    check_p5,
    check_p_H,
    check_pstar_H,
    conjugate,
    delta_H,
)
from .inclusion import (
    InclusionMatrix,
    LinearSystem,
    build_inclusion_matrix,
    exact_rank,
    solve_log_system,
)
from .reconstruct import (
    EdgeClassification,
    EdgeLabel,
    Verdict,
    all_injective_maps,
    color_balance,
    evaluate_all_phi,
    gcd_dichotomy_search,
    reconstruct,
)
from .lemmas import (
    CoverageReport,
    EdgeColoring,
    Partition,
    check_partition_p1,
    classify_pairwise_regular_up_to,
    counting_lemma_experiment,
    find_bichromatic_kr,
    is_pairwise_outer_regular,
    is_pairwise_regular,
    kr_edge_coverage,
    pair_regularity,
    random_equipartition,
)
from .pipeline import AnalyzeConfig, AnalyzeVerdict, QuasiRandomReport, analyze
