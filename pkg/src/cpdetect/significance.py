"""Significance of detected pairs against an Erdos-Renyi null.

For every pair the correlation quality is compared with the qualities that
BE detection reaches on random graphs of matching size. The per-pair level
is Sidak-corrected for the number of pairs tested.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache

import numpy as np

from .be import UndefinedQualityError, _pearson_lower, _search
from .graph import Network, _er_edges
from .labeling import Labeling

__all__ = [
    "NULL_MODES",
    "QUALITY_MODES",
    "PairVerdict",
    "SignificanceReport",
    "sidak_alpha",
    "pair_quality",
    "null_qualities",
    "empirical_threshold",
    "test_significance",
    "report_to_json",
]

NULL_MODES = ("pair", "full")
QUALITY_MODES = ("subgraph", "network")


def sidak_alpha(alpha_prime: float, n_tests: int) -> float:
    """Per-test level keeping the family-wise error at ``alpha_prime``."""
    if n_tests < 1:
        raise ValueError("number of tests must be a positive integer")
    if not 0.0 < alpha_prime < 1.0:
        raise ValueError("alpha_prime must lie in (0, 1)")
    if n_tests == 1:
        return alpha_prime
    # 1 - (1 - a)^(1/C), written to stay accurate for tiny a
    return -math.expm1(math.log1p(-alpha_prime) / n_tests)


class UntestablePair(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _quality(adj: np.ndarray, core: np.ndarray) -> float:
    n = adj.shape[0]
    if n < 3:
        raise UntestablePair("too-small")
    n_core = int(core.sum())
    if n_core == 0:
        raise UntestablePair("no-core")
    if n - n_core < 2:
        raise UntestablePair("constant-idealized")
    rows, cols = np.tril_indices(n, -1)
    a = adj[rows, cols].astype(float)
    m = a.sum()
    if m == 0 or m == len(a):
        raise UntestablePair("constant-adjacency")
    b = (core[rows] | core[cols]).astype(float)
    return _pearson_lower(a, b)


def pair_quality(lab: Labeling, net: Network, k: int, mode: str = "subgraph") -> float:
    """Correlation quality of pair ``k``.

    ``mode="subgraph"`` evaluates it on the subgraph induced by the pair's
    members; ``mode="network"`` evaluates it on the whole network with every
    node outside the pair treated as periphery.

    Raises
    ------
    UndefinedQualityError
        When the pair cannot be tested; the exception message is the reason code.
    """
    lab = lab.aligned(net)
    members = lab.members(k)
    if len(members) == 0:
        raise KeyError(f"no pair {k}")
    try:
        if mode == "subgraph":
            return _quality(net.adjacency[np.ix_(members, members)], lab.core[members])
        if mode == "network":
            core = lab.core & (lab.pairs == k)
            return _quality(net.adjacency, core)
    except UntestablePair as exc:
        raise UndefinedQualityError(exc.reason) from None
    raise ValueError(f"unknown quality mode {mode!r}")


def _null_seed(seed: int, n: int, m: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), n, m, index])


@lru_cache(maxsize=64)
def _null_cached(n: int, m: int, samples: int, seed: int, restarts: int) -> np.ndarray:
    out = np.empty(samples)
    for s in range(samples):
        ss = _null_seed(seed, n, m, s)
        graph_ss, be_ss = ss.spawn(2)
        edges = _er_edges(n, m, np.random.default_rng(graph_ss))
        adj = np.zeros((n, n), dtype=np.uint8)
        adj[edges[:, 0], edges[:, 1]] = 1
        adj[edges[:, 1], edges[:, 0]] = 1
        be_seed = int(be_ss.generate_state(1)[0])
        _, q = _search(adj, m, restarts, be_seed)
        out[s] = q
    out.sort()
    out.setflags(write=False)
    return out


def null_qualities(n: int, m: int, samples: int, seed: int = 0, restarts: int = 10) -> np.ndarray:
    """Sorted BE qualities on ``samples`` uniform random graphs with ``n`` nodes, ``m`` edges.

    Sample ``s`` draws its graph and its BE seed from
    ``SeedSequence([seed, n, m, s])``, so the result depends only on the
    arguments and not on evaluation order.
    """
    if n < 3 or not 0 < m < n * (n - 1) // 2:
        raise ValueError("null graphs would have a constant adjacency")
    return _null_cached(int(n), int(m), int(samples), int(seed), int(restarts))


def empirical_threshold(null: np.ndarray, alpha: float) -> float:
    """Smallest null value that at least a fraction ``1 - alpha`` of samples do not exceed.

    A quality strictly above it beats at least ``(1 - alpha) * S`` samples.
    """
    s = len(null)
    rank = max(math.ceil((1.0 - alpha) * s - 1e-9), 1)
    return float(np.sort(null)[rank - 1])


@dataclass(frozen=True)
class PairVerdict:
    k: int
    q: float | None
    threshold: float | None
    significant: bool
    n_core: int
    n_periphery: int
    reason: str | None = None


@dataclass(frozen=True, eq=False)
class SignificanceReport:
    pairs: tuple[PairVerdict, ...]
    alpha_prime: float
    corrected_alpha: float
    samples: int
    null_mode: str
    seed: int
    quality_mode: str = "subgraph"
    labeling: Labeling | None = field(default=None, repr=False)

    def verdict(self, k: int) -> PairVerdict:
        for p in self.pairs:
            if p.k == k:
                return p
        raise KeyError(k)


def test_significance(
    lab: Labeling,
    net: Network,
    samples: int = 1000,
    alpha_prime: float = 0.05,
    null_mode: str = "pair",
    seed: int = 0,
    *,
    quality_mode: str = "subgraph",
    restarts: int = 10,
) -> SignificanceReport:
    """Test every pair of ``lab`` against BE on random graphs.

    Parameters
    ----------
    lab, net
        A labeling and the network it was detected on.
    samples : int
        Random graphs per null distribution (at least 100).
    alpha_prime : float
        Family-wise level, Sidak-corrected over the pair count.
    null_mode : {"pair", "full"}
        ``"pair"`` matches each pair's induced node and edge counts;
        ``"full"`` matches the whole network.
    seed : int
    quality_mode : {"subgraph", "network"}
        How a pair's own quality is evaluated, see :func:`pair_quality`.
    restarts : int
        BE restarts on each null graph.

    Returns
    -------
    SignificanceReport
        ``report.labeling`` is a copy of ``lab`` whose ``significant`` flags
        are False for members of insignificant or untestable pairs.
    """
    if samples < 100:
        raise ValueError("at least 100 null samples are required")
    if null_mode not in NULL_MODES:
        raise ValueError(f"null_mode must be one of {NULL_MODES}")
    if quality_mode not in QUALITY_MODES:
        raise ValueError(f"quality_mode must be one of {QUALITY_MODES}")
    lab = lab.aligned(net)
    n_pairs = lab.pair_count
    alpha = sidak_alpha(alpha_prime, n_pairs)
    flags = np.zeros(net.n_nodes, dtype=bool)
    verdicts = []
    for k in range(1, n_pairs + 1):
        members = lab.members(k)
        n_core = int(lab.core[members].sum())
        n_per = len(members) - n_core
        try:
            q = pair_quality(lab, net, k, quality_mode)
        except UndefinedQualityError as exc:
            verdicts.append(PairVerdict(k, None, None, False, n_core, n_per, str(exc)))
            continue
        if null_mode == "pair":
            n = len(members)
            m = int(net.adjacency[np.ix_(members, members)].sum()) // 2
        else:
            n, m = net.n_nodes, net.n_edges
        threshold = empirical_threshold(null_qualities(n, m, samples, seed, restarts), alpha)
        significant = bool(q > threshold)
        flags[members] = significant
        verdicts.append(PairVerdict(k, q, threshold, significant, n_core, n_per))
    return SignificanceReport(
        tuple(verdicts),
        alpha_prime,
        alpha,
        samples,
        null_mode,
        seed,
        quality_mode,
        replace(lab, significant=flags),
    )


test_significance.__test__ = False  # not a pytest test despite the name


def report_to_json(report: SignificanceReport) -> str:
    doc = {
        "schema": 1,
        "pairs": [asdict(p) for p in report.pairs],
        "alpha_prime": report.alpha_prime,
        "corrected_alpha": report.corrected_alpha,
        "samples": report.samples,
        "null_mode": report.null_mode,
        "quality_mode": report.quality_mode,
        "seed": report.seed,
    }
    return json.dumps(doc, indent=2) + "\n"


def report_from_json(text: str) -> dict:
    return json.loads(text)
