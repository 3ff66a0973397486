"""Compiled inner loops. Falls back to plain Python when numba is absent."""
from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def be_closed_form(n_nodes, n_edges, n_per, e_pp):
    """Correlation quality from (periphery size, periphery-internal edges).

    Returns NaN when the idealized matrix or the adjacency is constant.
    """
    total = n_nodes * (n_nodes - 1) / 2.0
    ideal = total - n_per * (n_per - 1) / 2.0
    if ideal <= 0.0 or ideal >= total or n_edges <= 0 or n_edges >= total:
        return np.nan
    num = (n_edges - e_pp) - n_edges * ideal / total
    den = math.sqrt(n_edges * (1.0 - n_edges / total)) * math.sqrt(ideal * (1.0 - ideal / total))
    return num / den


@njit(cache=True)
def be_local_search(adj, core, n_edges):
    """Steepest-ascent single-flip search; ``core`` is modified in place.

    Ties between equally good flips go to the lowest node index. Flips that
    would make the idealized matrix constant are never taken.
    """
    n = adj.shape[0]
    k_per = np.zeros(n, dtype=np.int64)
    n_per = 0
    e_pp = 0
    for i in range(n):
        if not core[i]:
            n_per += 1
    for i in range(n):
        s = 0
        for j in range(n):
            if adj[i, j] and not core[j]:
                s += 1
        k_per[i] = s
        if not core[i]:
            e_pp += s
    e_pp //= 2
    current = be_closed_form(n, n_edges, n_per, e_pp)
    while True:
        best = -np.inf
        best_i = -1
        for i in range(n):
            if core[i]:
                q = be_closed_form(n, n_edges, n_per + 1, e_pp + k_per[i])
            else:
                q = be_closed_form(n, n_edges, n_per - 1, e_pp - k_per[i])
            if not np.isnan(q) and q > best + 1e-12:
                best = q
                best_i = i
        if best_i < 0 or not best > current + 1e-12:
            break
        v = best_i
        if core[v]:
            core[v] = False
            n_per += 1
            e_pp += k_per[v]
            for j in range(n):
                if adj[v, j]:
                    k_per[j] += 1
        else:
            core[v] = True
            n_per -= 1
            e_pp -= k_per[v]
            for j in range(n):
                if adj[v, j]:
                    k_per[j] -= 1
        current = best
    return current
