"""Binary MINRES: fit the single-pair pattern, ignoring core-periphery ties.

The residual counts missing core-core edges and present periphery-periphery
edges. Candidates are the prefixes of the degree ordering.
"""
from __future__ import annotations

import numpy as np

from .be import UndefinedQualityError, be_quality
from .graph import DegenerateNetworkError, Network
from .labeling import SinglePairAssignment, core_vector

__all__ = ["minres_cost", "detect_minres", "ALGORITHM_NAME"]

ALGORITHM_NAME = "minres-binary"


def minres_cost(assign, net: Network) -> int:
    """Absent core-core edges plus present periphery-periphery edges."""
    x = core_vector(assign, net)
    a = net.adjacency
    n_core = int(x.sum())
    cc_edges = int(a[np.ix_(x, x)].sum()) // 2
    pp_edges = int(a[np.ix_(~x, ~x)].sum()) // 2
    return (n_core * (n_core - 1) // 2 - cc_edges) + pp_edges


def detect_minres(net: Network) -> SinglePairAssignment:
    """Minimum-cost degree-ordered cut.

    Nodes are sorted by degree (descending, ties by index); the core is the
    top ``k`` for the ``k`` in ``0..N`` with least cost. Among equal costs a
    cut that does not separate two nodes of equal degree is preferred (such a
    split only reflects index order), then the smallest ``k``.
    """
    n = net.n_nodes
    if n < 2:
        raise DegenerateNetworkError("MINRES needs at least two nodes")
    order = np.lexsort((np.arange(n), -net.degrees))
    deg = net.degrees[order]
    a = net.adjacency[np.ix_(order, order)].astype(np.int64)
    # k = 0: everything periphery
    cost = net.n_edges
    best = (cost, 0, 0)
    for k in range(1, n + 1):
        v = k - 1
        into_core = int(a[v, :v].sum())
        into_per = int(a[v, k:].sum())
        # v leaves the periphery (its periphery edges stop counting) and joins the core
        cost += (v - into_core) - into_per
        splits = int(k < n and deg[k - 1] == deg[k])
        best = min(best, (cost, splits, k))
    best_cost, _, best_k = best
    core = np.zeros(n, dtype=bool)
    core[order[:best_k]] = True
    try:
        quality = be_quality(core, net)
    except (UndefinedQualityError, DegenerateNetworkError):
        quality = None
    return SinglePairAssignment(net.node_ids, core, quality, ALGORITHM_NAME, cost=best_cost)
