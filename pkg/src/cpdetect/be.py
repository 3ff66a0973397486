"""Borgatti-Everett single core-periphery detection.

The quality of a coreness vector ``x`` is the Pearson correlation between
the lower-triangular adjacency entries and those of the idealized matrix
in which a pair is linked whenever at least one endpoint is core.
"""
from __future__ import annotations

import math

import numpy as np

from ._kernels import be_local_search
from .graph import DegenerateNetworkError, Network
from .labeling import SinglePairAssignment, core_vector

__all__ = [
    "UndefinedQualityError",
    "be_quality",
    "detect_be",
    "degree_threshold_assignment",
    "default_restarts",
]


class UndefinedQualityError(ValueError):
    """The correlation is undefined because one of the two matrices is constant."""


def _pearson_lower(a: np.ndarray, b: np.ndarray) -> float:
    da = a - a.mean()
    db = b - b.mean()
    sa = math.sqrt(float(da @ da))
    sb = math.sqrt(float(db @ db))
    return float(da @ db) / (sa * sb)


def be_quality(assign, net: Network) -> float:
    """Correlation quality of a coreness assignment on ``net``.

    Parameters
    ----------
    assign : mapping or array_like
        Node id -> 1/0 (core/periphery), or a boolean vector in node order.
    net : Network

    Raises
    ------
    UndefinedQualityError
        If the idealized matrix is constant (no core, or fewer than two
        periphery nodes) or the network is complete or empty.
    """
    if net.n_nodes < 3:
        raise DegenerateNetworkError("quality needs at least three nodes")
    x = core_vector(assign, net)
    n_core = int(x.sum())
    if n_core == 0 or net.n_nodes - n_core < 2:
        raise UndefinedQualityError("constant idealized matrix")
    if net.n_edges == 0 or net.n_edges == net.n_pairs:
        raise UndefinedQualityError("constant adjacency")
    rows, cols = np.tril_indices(net.n_nodes, -1)
    a = net.adjacency[rows, cols].astype(float)
    b = (x[rows] | x[cols]).astype(float)
    return _pearson_lower(a, b)


def default_restarts(n_nodes: int) -> int:
    return 50 if n_nodes <= 500 else 10


def _random_start(n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        core = rng.random(n) < 0.5
        n_core = int(core.sum())
        if n_core >= 1 and n - n_core >= 2:
            return core


def _search(adj: np.ndarray, n_edges: int, restarts: int, seed: int) -> tuple[np.ndarray, float]:
    n = adj.shape[0]
    best_core, best_q = None, -np.inf
    for r in range(restarts):
        core = _random_start(n, np.random.default_rng(seed + r))
        q = be_local_search(adj, core, n_edges)
        if q > best_q + 1e-12:
            best_core, best_q = core, q
    return best_core, best_q


def detect_be(net: Network, restarts: int | None = None, seed: int = 0) -> SinglePairAssignment:
    """Find a coreness vector maximizing the correlation quality.

    Each restart draws every node as core with probability 1/2 (redrawn
    until the start is non-degenerate) from ``default_rng(seed + r)`` and
    runs steepest-ascent single flips to a local maximum. The best restart
    wins; ties go to the lowest restart index.
    """
    if net.n_nodes < 3:
        raise DegenerateNetworkError("BE needs at least three nodes")
    if net.n_edges == 0 or net.n_edges == net.n_pairs:
        raise DegenerateNetworkError("constant adjacency")
    if restarts is None:
        restarts = default_restarts(net.n_nodes)
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    adj = net.adjacency.view(np.uint8)
    core, _ = _search(adj, net.n_edges, restarts, int(seed))
    quality = be_quality(core, net)
    return SinglePairAssignment(net.node_ids, core, quality, "be")


def degree_threshold_assignment(net: Network, fraction: float = 0.25) -> np.ndarray:
    """Top ``ceil(fraction * N)`` nodes by degree as core (ties by index)."""
    k = math.ceil(fraction * net.n_nodes)
    order = np.lexsort((np.arange(net.n_nodes), -net.degrees))
    core = np.zeros(net.n_nodes, dtype=bool)
    core[order[:k]] = True
    return core
