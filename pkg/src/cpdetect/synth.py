"""Planted core-periphery networks, synthetic trade logs and exhaustive oracles."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from typing import Mapping, Sequence

import numpy as np

from .be import UndefinedQualityError, be_quality
from .graph import DegenerateNetworkError, Network
from .kmer import qcp
from .labeling import Labeling
from .minres import minres_cost
from .temporal import TransactionLog, TransactionRecord, window_of

__all__ = [
    "OracleSizeError",
    "PlantedNetwork",
    "SyntheticLog",
    "plant_cp_network",
    "brute_force_qcp",
    "brute_force_be",
    "brute_force_minres",
    "synth_transactions",
    "ORACLE_MAX_NODES",
]

ORACLE_MAX_NODES = 9


class OracleSizeError(ValueError):
    """The network is too large for exhaustive enumeration."""


@dataclass(frozen=True)
class PlantedNetwork:
    network: Network
    truth: Labeling
    dropped: tuple[str, ...] = ()


def _check_pairs(pairs) -> list[tuple[int, int, float, float, float]]:
    spec = [tuple(p) for p in pairs]
    if not spec:
        raise ValueError("at least one pair is required")
    for nc, npp, *probs in spec:
        if nc < 1 or npp < 1:
            raise ValueError("pair sizes must be >= 1")
        if len(probs) != 3 or not all(0.0 <= p <= 1.0 for p in probs):
            raise ValueError("each pair needs three probabilities in [0, 1]")
    return [(int(a), int(b), float(c), float(d), float(e)) for a, b, c, d, e in spec]


def _planted_layout(spec, p_inter: float):
    """Pair id, coreness and the dyad probability matrix for a planted structure."""
    pair_ids, core = [], []
    for k, (nc, npp, *_probs) in enumerate(spec, 1):
        pair_ids += [k] * (nc + npp)
        core += [True] * nc + [False] * npp
    pair_ids = np.array(pair_ids)
    core = np.array(core)
    n = len(pair_ids)
    prob = np.full((n, n), float(p_inter))
    for k, (_nc, _np, p_cc, p_cp, p_pp) in enumerate(spec, 1):
        in_k = pair_ids == k
        cc = np.outer(in_k & core, in_k & core)
        pp = np.outer(in_k & ~core, in_k & ~core)
        cp = np.outer(in_k & core, in_k & ~core)
        cp = cp | cp.T
        prob[cc], prob[cp], prob[pp] = p_cc, p_cp, p_pp
    return pair_ids, core, prob


def _draw_edges(prob: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    rows, cols = np.triu_indices(prob.shape[0], 1)
    hit = rng.random(len(rows)) < prob[rows, cols]
    return np.column_stack([rows[hit], cols[hit]])


def plant_cp_network(
    pairs: Sequence[Sequence[float]],
    p_inter: float = 0.0,
    seed=None,
    prefix: str = "v",
) -> PlantedNetwork:
    """Draw a network with planted core-periphery pairs.

    Parameters
    ----------
    pairs : sequence of (n_core, n_periphery, p_cc, p_cp, p_pp)
    p_inter : float
        Probability of each dyad between different pairs.
    seed : int or Generator, optional

    Returns
    -------
    PlantedNetwork
        Nodes left isolated are removed from network and truth and listed
        in ``dropped``.
    """
    spec = _check_pairs(pairs)
    if not 0.0 <= p_inter <= 1.0:
        raise ValueError("p_inter must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    pair_ids, core, prob = _planted_layout(spec, p_inter)
    n = len(pair_ids)
    width = max(3, len(str(n - 1)))
    ids = [f"{prefix}{i:0{width}d}" for i in range(n)]
    edges = _draw_edges(prob, rng)
    deg = np.bincount(edges.ravel(), minlength=n)
    keep = np.flatnonzero(deg > 0)
    if len(keep) == 0:
        raise DegenerateNetworkError("planted network has no edges")
    remap = np.full(n, -1)
    remap[keep] = np.arange(len(keep))
    net = Network(tuple(ids[i] for i in keep), remap[edges])
    truth = Labeling(net.node_ids, pair_ids[keep], core[keep], algorithm="planted")
    truth = Labeling(truth.node_ids, truth.pairs, truth.core, q_value=qcp(truth, net), algorithm="planted")
    dropped = tuple(ids[i] for i in np.flatnonzero(deg == 0))
    return PlantedNetwork(net, truth, dropped)


def _check_oracle_size(net: Network):
    if net.n_nodes > ORACLE_MAX_NODES:
        raise OracleSizeError(f"exhaustive oracle limited to N <= {ORACLE_MAX_NODES}, got {net.n_nodes}")
    if net.n_nodes < 2:
        raise DegenerateNetworkError("oracle needs at least two nodes")


def _restricted_growth_strings(n: int):
    """All set partitions of n items as restricted-growth strings."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    a[0] = 0
    yield from rec(1, 0)


def _brute_force_enumerate(net: Network):
    n = net.n_nodes
    L, M = net.n_pairs, net.n_edges
    rows, cols = np.tril_indices(n, -1)
    w = net.n_pairs * net.adjacency[rows, cols].astype(np.int64) - M
    best_val, best = None, None
    bits = np.array(list(itertools.product([1, 0], repeat=n)), dtype=bool)
    or_pairs = bits[:, rows] | bits[:, cols]
    for rgs in _restricted_growth_strings(n):
        c = np.array(rgs)
        same = c[rows] == c[cols]
        vals = (or_pairs & same) @ w
        i = int(np.argmax(vals))
        if best_val is None or vals[i] > best_val:
            best_val, best = int(vals[i]), (c + 1, bits[i])
    return best, best_val / L


def _brute_force_dp(net: Network):
    n = net.n_nodes
    L, M = net.n_pairs, net.n_edges
    rows, cols = np.tril_indices(n, -1)
    w = L * net.adjacency[rows, cols].astype(np.int64) - M
    full = (1 << n) - 1
    member = ((np.arange(full + 1)[:, None] >> np.arange(n)) & 1).astype(bool)
    both_in = member[:, rows] & member[:, cols]
    # best coreness within every subset, treated as one pair
    block_val = np.zeros(full + 1, dtype=np.int64)
    block_core = np.zeros(full + 1, dtype=np.int64)
    for mask in range(1, full + 1):
        subs = []
        s = mask
        while True:
            subs.append(s)
            if s == 0:
                break
            s = (s - 1) & mask
        subs = np.array(subs)
        counted = both_in[mask] & (member[subs][:, rows] | member[subs][:, cols])
        vals = counted @ w
        i = int(np.argmax(vals))
        block_val[mask], block_core[mask] = vals[i], subs[i]
    # best split of every set into pairs; the lowest member anchors one pair
    best = np.zeros(full + 1, dtype=np.int64)
    choice = np.zeros(full + 1, dtype=np.int64)
    for mask in range(1, full + 1):
        low = mask & -mask
        rest = mask ^ low
        s = rest
        top = None
        while True:
            blk = s | low
            v = block_val[blk] + best[mask ^ blk]
            if top is None or v > top:
                top, pick = v, blk
            if s == 0:
                break
            s = (s - 1) & rest
        best[mask], choice[mask] = top, pick
    pairs = np.zeros(n, dtype=np.int64)
    core = np.zeros(n, dtype=bool)
    mask, k = full, 1
    while mask:
        blk = int(choice[mask])
        pairs[member[blk]] = k
        core |= member[int(block_core[blk])]
        mask ^= blk
        k += 1
    return (pairs, core), int(best[full]) / L


def brute_force_qcp(net: Network, method: str = "dp") -> tuple[Labeling, float]:
    """Global maximum of the multi-pair quality over all partitions and corenesses.

    ``method="enumerate"`` walks every set partition (restricted-growth
    strings) and every coreness vector. ``method="dp"`` uses the fact that
    the quality is a sum of independent per-pair terms: it first finds the
    best coreness of every node subset and then the best split of the node
    set into subsets. Both are exact; ``dp`` is orders of magnitude faster.
    """
    _check_oracle_size(net)
    if method == "dp":
        (pairs, core), q = _brute_force_dp(net)
    elif method == "enumerate":
        (pairs, core), q = _brute_force_enumerate(net)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Labeling(net.node_ids, pairs, core, q_value=q, algorithm="oracle"), q


def brute_force_be(net: Network) -> tuple[np.ndarray, float]:
    """Best correlation quality over every coreness vector for which it is defined."""
    _check_oracle_size(net)
    best_q, best = -np.inf, None
    for bits in itertools.product([False, True], repeat=net.n_nodes):
        x = np.array(bits)
        try:
            q = be_quality(x, net)
        except UndefinedQualityError:
            continue
        if q > best_q:
            best_q, best = q, x
    if best is None:
        raise UndefinedQualityError("no coreness vector has a defined quality")
    return best, best_q


def brute_force_minres(net: Network) -> tuple[np.ndarray, int]:
    """Least MINRES cost over all 2^N coreness vectors."""
    _check_oracle_size(net)
    best_c, best = None, None
    for bits in itertools.product([False, True], repeat=net.n_nodes):
        x = np.array(bits)
        c = minres_cost(x, net)
        if best_c is None or c < best_c:
            best_c, best = c, x
    return best, best_c


@dataclass(frozen=True)
class SyntheticLog:
    log: TransactionLog
    truth: Mapping[str, Labeling] = field(default_factory=dict)
    scale: str = "quarter"


def _window_start(origin: date, scale: str, w: int) -> date:
    _, start, _ = window_of(origin, scale)
    if scale == "day":
        return start + timedelta(days=w)
    if scale == "week":
        return start + timedelta(weeks=w)
    months = {"month": 1, "quarter": 3}[scale]
    y, m = divmod(start.month - 1 + months * w, 12)
    return date(start.year + y, m + 1, 1)


def _regime_for(regimes, w: int) -> Mapping:
    chosen = None
    for reg in sorted(regimes, key=lambda r: int(r.get("start", 0))):
        if int(reg.get("start", 0)) <= w:
            chosen = reg
    if chosen is None:
        raise ValueError(f"no regime covers window {w}")
    return chosen


def synth_transactions(
    windows: int,
    scale: str,
    regimes: Sequence[Mapping],
    seed=None,
    start: date = date(2000, 1, 1),
    extra_trade_rate: float = 0.5,
) -> SyntheticLog:
    """Generate a trade log whose windows realize planted core-periphery pairs.

    Parameters
    ----------
    windows : int
        Number of consecutive windows.
    scale : {"day", "week", "month", "quarter"}
    regimes : sequence of mapping
        Each has ``"pairs"`` (as in :func:`plant_cp_network`), optional
        ``"p_inter"`` and ``"start"`` (first window index it applies to).
        Window ``w`` uses the regime with the largest ``start <= w``.
    seed : int, optional
    start : date
        A day inside the first window.
    extra_trade_rate : float
        Each planted edge produces ``1 + Poisson(extra_trade_rate)`` trades
        with random direction.

    Returns
    -------
    SyntheticLog
        The log (sorted by time) and the planted labeling of each window,
        restricted to that window's active banks.
    """
    if not regimes:
        raise ValueError("at least one regime is required")
    if scale not in ("day", "week", "month", "quarter"):
        raise ValueError("synthetic logs support day, week, month and quarter windows")
    if windows < 1:
        raise ValueError("windows must be >= 1")
    root = np.random.SeedSequence(0 if seed is None else int(seed))
    records = []
    truth = {}
    for w, ss in enumerate(root.spawn(windows)):
        reg = _regime_for(regimes, w)
        rng = np.random.default_rng(ss)
        planted = plant_cp_network(reg["pairs"], reg.get("p_inter", 0.0), rng, prefix="b")
        net = planted.network
        w_start = _window_start(start, scale, w)
        label, _, w_end = window_of(w_start, scale)
        span = ((w_end - w_start).days + 1) * 86400
        t0 = datetime.combine(w_start, datetime.min.time())
        for i, j in net.edges.tolist():
            for _ in range(1 + int(rng.poisson(extra_trade_rate))):
                lender, borrower = (i, j) if rng.random() < 0.5 else (j, i)
                ts = t0 + timedelta(seconds=int(rng.integers(span)))
                amount = round(float(math.exp(rng.uniform(math.log(0.1), math.log(100.0)))), 4)
                records.append((ts, net.node_ids[lender], net.node_ids[borrower], max(amount, 0.1)))
        truth[label] = planted.truth
    records.sort(key=lambda r: r[0])
    recs = tuple(TransactionRecord(ts, a, b, amt, line=n + 2) for n, (ts, a, b, amt) in enumerate(records))
    return SyntheticLog(TransactionLog(recs), truth, scale)
