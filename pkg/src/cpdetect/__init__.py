"""Core-periphery detection on networks built from bilateral trade logs."""
from .be import UndefinedQualityError, be_quality, detect_be
from .graph import (
    DegenerateNetworkError,
    Network,
    build_network,
    density,
    induced_subgraph,
    read_edge_list,
    sample_er,
    write_edge_list,
)
from .kmer import delta_qcp, detect_kmer, qcp
from .labeling import Labeling, SinglePairAssignment
from .metrics import (
    BlockDensities,
    StructureClass,
    alluvial_flows,
    attribute_fractions,
    block_densities,
    classify_structure,
    jaccard,
    jaccard_matrix,
)
from .minres import detect_minres, minres_cost
from .significance import SignificanceReport, pair_quality, sidak_alpha, test_significance
from .synth import brute_force_be, brute_force_minres, brute_force_qcp, plant_cp_network, synth_transactions
from .temporal import TransactionLog, WindowedNetworkSeries, aggregate, parse_transactions

__version__ = "0.1.0"

__all__ = [
    "BlockDensities",
    "DegenerateNetworkError",
    "Labeling",
    "Network",
    "SignificanceReport",
    "SinglePairAssignment",
    "StructureClass",
    "TransactionLog",
    "UndefinedQualityError",
    "WindowedNetworkSeries",
    "aggregate",
    "alluvial_flows",
    "attribute_fractions",
    "be_quality",
    "block_densities",
    "brute_force_be",
    "brute_force_minres",
    "brute_force_qcp",
    "build_network",
    "classify_structure",
    "delta_qcp",
    "density",
    "detect_be",
    "detect_kmer",
    "detect_minres",
    "induced_subgraph",
    "jaccard",
    "jaccard_matrix",
    "minres_cost",
    "pair_quality",
    "parse_transactions",
    "plant_cp_network",
    "qcp",
    "read_edge_list",
    "sample_er",
    "sidak_alpha",
    "synth_transactions",
    "test_significance",
    "write_edge_list",
]
