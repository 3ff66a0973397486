"""Multiple core-periphery pairs by label switching.

The objective counts, over dyads inside the same pair with at least one
core endpoint, the excess of observed adjacency over the overall density:

    Q = sum_{i<j} (A_ij - rho) (x_i + x_j - x_i x_j) delta(c_i, c_j)

Internally everything is kept as the integer ``Q * L`` (``L = N(N-1)/2``),
since ``L * (A_ij - rho) = L * A_ij - M``. Comparisons between candidate
moves are therefore exact.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .graph import DegenerateNetworkError, Network
from .labeling import Labeling

__all__ = ["qcp", "delta_qcp", "detect_kmer", "ALGORITHM_NAME", "SweepLimitError"]

ALGORITHM_NAME = "km-er"


class SweepLimitError(RuntimeError):
    """Label switching failed to converge within the sweep cap."""


def qcp(lab: Labeling, net: Network) -> float:
    """Evaluate the multi-pair quality of ``lab`` on ``net`` directly."""
    if net.n_nodes < 2:
        raise DegenerateNetworkError("quality needs at least two nodes")
    lab = lab.aligned(net)
    rho = net.n_edges / net.n_pairs
    rows, cols = np.tril_indices(net.n_nodes, -1)
    a = net.adjacency[rows, cols].astype(float)
    x = lab.core.astype(float)
    b = (x[rows] + x[cols] - x[rows] * x[cols]) * (lab.pairs[rows] == lab.pairs[cols])
    return float(np.sum((a - rho) * b))


def _qcp_scaled(pair: np.ndarray, core: np.ndarray, net: Network) -> int:
    rows, cols = np.tril_indices(net.n_nodes, -1)
    counted = (pair[rows] == pair[cols]) & (core[rows] | core[cols])
    a = net.adjacency[rows, cols]
    edges = int(np.count_nonzero(a & counted))
    dyads = int(np.count_nonzero(counted))
    return net.n_pairs * edges - net.n_edges * dyads


def _move_gain(net, pair, core, n_core, n_per, i, c, x) -> int:
    """Scaled contribution of node ``i`` if placed in (c, x), with ``i`` removed from its pair."""
    nb = net.neighbors[i]
    in_c = pair[nb] == c
    k_all = int(np.count_nonzero(in_c))
    k_core = int(np.count_nonzero(in_c & core[nb]))
    own = pair[i] == c
    nc = int(n_core[c]) - int(own and core[i])
    npp = int(n_per[c]) - int(own and not core[i])
    L, M = net.n_pairs, net.n_edges
    if x:
        return L * k_all - M * (nc + npp)
    return L * k_core - M * nc


def _counts(pair: np.ndarray, core: np.ndarray, size: int):
    n_core = np.bincount(pair[core], minlength=size).astype(np.int64)
    n_per = np.bincount(pair[~core], minlength=size).astype(np.int64)
    return n_core, n_per


def delta_qcp(lab: Labeling, net: Network, node: str, new_pair: int, new_coreness: int | bool) -> float:
    """Change in quality if ``node`` moves to ``(new_pair, new_coreness)``.

    Computed from the node's neighbourhood and the pair membership counts.
    A ``new_pair`` id not used by the labeling denotes a fresh singleton pair.
    """
    lab = lab.aligned(net)
    i = net.index[node]
    size = max(lab.pair_count, int(new_pair)) + 1
    pair = lab.pairs
    core = lab.core
    n_core, n_per = _counts(pair, core, size)
    before = _move_gain(net, pair, core, n_core, n_per, i, pair[i], core[i])
    after = _move_gain(net, pair, core, n_core, n_per, i, int(new_pair), bool(new_coreness))
    return (after - before) / net.n_pairs


def _label_switching(
    net: Network,
    rng: np.random.Generator,
    check: bool,
    on_commit: Callable[[int], None] | None,
) -> tuple[np.ndarray, np.ndarray, int]:
    n = net.n_nodes
    L, M = net.n_pairs, net.n_edges
    nbrs = net.neighbors
    pair = np.arange(n, dtype=np.int64)
    core = np.ones(n, dtype=bool)
    n_core = np.ones(n, dtype=np.int64)
    n_per = np.zeros(n, dtype=np.int64)
    q = last_full = 0
    for _ in range(100 * n):
        changed = False
        for i in rng.permutation(n):
            nb = nbrs[i]
            if len(nb) == 0:
                continue
            scan = nb[rng.permutation(len(nb))]
            sp = pair[scan]
            uniq, first, inv = np.unique(sp, return_index=True, return_inverse=True)
            k_core = np.bincount(inv, weights=core[scan], minlength=len(uniq)).astype(np.int64)
            k_all = np.bincount(inv, minlength=len(uniq)).astype(np.int64)
            ci, xi = pair[i], core[i]
            own = uniq == ci
            own_k_all = int(k_all[own].sum())
            own_k_core = int(k_core[own].sum())
            if xi:
                base = L * own_k_all - M * (n_core[ci] - 1 + n_per[ci])
            else:
                base = L * own_k_core - M * n_core[ci]
            # candidates in the order their pair is first met in the scan
            enc = np.argsort(first)
            uniq, k_core, k_all, own = uniq[enc], k_core[enc], k_all[enc], own[enc]
            nc = n_core[uniq] - (own & xi)
            npp = n_per[uniq] - (own & (not xi))
            # periphery before core, so an exact tie keeps the core small
            gains = np.empty(2 * len(uniq), dtype=np.int64)
            gains[0::2] = L * k_core - M * nc
            gains[1::2] = L * k_all - M * (nc + npp)
            gains -= base
            best = int(np.argmax(gains))
            d = int(gains[best])
            if d <= 0:
                continue
            c_new, x_new = int(uniq[best // 2]), best % 2 == 1
            if xi:
                n_core[ci] -= 1
            else:
                n_per[ci] -= 1
            if x_new:
                n_core[c_new] += 1
            else:
                n_per[c_new] += 1
            pair[i], core[i] = c_new, x_new
            q += d
            changed = True
            if check:
                full = _qcp_scaled(pair, core, net)
                assert full == q, f"incremental quality drifted: {q} != {full}"
                assert full > last_full, "quality did not increase after a committed move"
                last_full = full
            if on_commit is not None:
                on_commit(q)
        if not changed:
            return pair, core, q
    raise SweepLimitError(f"no convergence after {100 * n} sweeps")


def detect_kmer(
    net: Network,
    runs: int = 10,
    seed: int = 0,
    *,
    check: bool = False,
    callback: Callable[[int, float], None] | None = None,
) -> Labeling:
    """Detect multiple core-periphery pairs.

    Every run starts from all nodes being core of their own singleton pair
    and sweeps the nodes in a random order drawn from
    ``default_rng(seed + run)``. A node tentatively joins the core and the
    periphery of each neighbour's pair (neighbours visited in random order)
    and takes the strictly best positive increment. Ties go to the first
    pair met in the scan and, within a pair, to the periphery. Sweeps
    repeat until one changes nothing.

    Parameters
    ----------
    net : Network
    runs : int
        Independent runs; the highest quality wins, lowest run index on ties.
    seed : int
    check : bool
        Recompute the quality from scratch after every move and assert that
        the tracked value matches and never decreases.
    callback : callable, optional
        Called as ``callback(run, quality)`` after each committed move.

    Returns
    -------
    Labeling
        Pairs renumbered 1..C by decreasing size.
    """
    if net.n_nodes < 2:
        raise DegenerateNetworkError("KM-ER needs at least two nodes")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    L = net.n_pairs
    best = None
    for r in range(runs):
        rng = np.random.default_rng(seed + r)
        hook = None
        if callback is not None:
            hook = lambda q, r=r: callback(r, q / L)  # noqa: E731
        pair, core, q = _label_switching(net, rng, check, hook)
        if best is None or q > best[2]:
            best = (pair, core, q)
    pair, core, q = best
    return Labeling(net.node_ids, pair + 1, core, q_value=q / L, algorithm=ALGORITHM_NAME)
