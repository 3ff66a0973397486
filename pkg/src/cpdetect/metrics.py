"""Block densities, structure classes, core stability and group flows."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Network
from .labeling import Labeling

__all__ = [
    "BlockDensities",
    "StructureClass",
    "block_densities",
    "classify_structure",
    "jaccard",
    "jaccard_matrix",
    "attribute_fractions",
    "alluvial_flows",
    "node_groups",
    "INACTIVE",
    "RESIDUAL",
]

INACTIVE = "inactive"
RESIDUAL = "residual"


@dataclass(frozen=True)
class BlockDensities:
    k: int
    n_core: int
    n_periphery: int
    rho_cc: float
    rho_cp: float
    rho_pp: float
    cc_edges: int = 0
    cp_edges: int = 0
    pp_edges: int = 0


class StructureClass(str, enum.Enum):
    STANDARD = "standard"
    BIPARTITE_LIKE = "bipartite-like"
    OTHER = "other"

    def __str__(self):
        return self.value


def _ratio(num: int, den: int) -> float:
    return num / den if den > 0 else 0.0


def block_densities(lab: Labeling, net: Network, k: int) -> BlockDensities:
    """Edge densities inside the core, between core and periphery, inside the periphery.

    A block whose pair count is zero gets density 0.
    """
    lab = lab.aligned(net)
    members = lab.members(k)
    if len(members) == 0:
        raise KeyError(f"no pair {k}")
    core = members[lab.core[members]]
    per = members[~lab.core[members]]
    a = net.adjacency
    cc = int(a[np.ix_(core, core)].sum()) // 2
    pp = int(a[np.ix_(per, per)].sum()) // 2
    cp = int(a[np.ix_(core, per)].sum())
    nc, npp = len(core), len(per)
    return BlockDensities(
        k,
        nc,
        npp,
        _ratio(cc, nc * (nc - 1) // 2),
        _ratio(cp, nc * npp),
        _ratio(pp, npp * (npp - 1) // 2),
        cc,
        cp,
        pp,
    )


def classify_structure(d: BlockDensities | Sequence[float]) -> StructureClass:
    """``standard`` if rho_cc > rho_cp > rho_pp, else ``bipartite-like`` if rho_cp > rho_cc."""
    if isinstance(d, BlockDensities):
        cc, cp, pp = d.rho_cc, d.rho_cp, d.rho_pp
    else:
        cc, cp, pp = d
    if cc > cp > pp:
        return StructureClass.STANDARD
    if cp > cc:
        return StructureClass.BIPARTITE_LIKE
    return StructureClass.OTHER


def jaccard(set_a: Iterable, set_b: Iterable) -> float:
    a, b = set(set_a), set(set_b)
    if not a and not b:
        raise ValueError("Jaccard index undefined for two empty sets")
    return len(a & b) / len(a | b)


def jaccard_matrix(cores: Sequence[Iterable]) -> np.ndarray:
    """Pairwise Jaccard indices of a series of node sets.

    Entries involving two empty sets are NaN.
    """
    sets = [set(c) for c in cores]
    n = len(sets)
    out = np.full((n, n), np.nan)
    for i in range(n):
        for j in range(i, n):
            if sets[i] or sets[j]:
                out[i, j] = out[j, i] = jaccard(sets[i], sets[j])
    return out


def attribute_fractions(lab: Labeling, net: Network, k: int) -> dict[str, tuple[float | None, float | None]]:
    """Share of each attribute value among the core and periphery of pair ``k``.

    A block with no nodes reports ``None`` instead of a fraction.
    """
    lab = lab.aligned(net)
    members = lab.members(k)
    if len(members) == 0:
        raise KeyError(f"no pair {k}")
    attrs = net.attributes or {}
    ids = [net.node_ids[i] for i in members]
    missing = [v for v in ids if v not in attrs]
    if missing:
        raise ValueError(f"nodes without attributes: {missing}")
    core_vals = Counter(attrs[net.node_ids[i]] for i in members if lab.core[i])
    per_vals = Counter(attrs[net.node_ids[i]] for i in members if not lab.core[i])
    n_core, n_per = sum(core_vals.values()), sum(per_vals.values())
    out = {}
    for value in sorted(set(core_vals) | set(per_vals)):
        out[value] = (
            core_vals[value] / n_core if n_core else None,
            per_vals[value] / n_per if n_per else None,
        )
    return out


def node_groups(lab: Labeling) -> dict[str, str]:
    """Map node id to its group: ``"<k>c"``/``"<k>p"`` for significant pairs, else ``"residual"``."""
    if lab.significant is None:
        raise ValueError("labeling carries no significance flags")
    out = {}
    for i, v in enumerate(lab.node_ids):
        if lab.significant[i]:
            out[v] = f"{lab.pairs[i]}{'c' if lab.core[i] else 'p'}"
        else:
            out[v] = RESIDUAL
    return out


def alluvial_flows(lab_from: Labeling, lab_to: Labeling) -> list[tuple[str, str, int]]:
    """Count nodes moving between groups of two consecutive labelings.

    Nodes present in only one labeling flow from or to ``"inactive"``.
    Rows are sorted by (group_from, group_to).
    """
    g_from, g_to = node_groups(lab_from), node_groups(lab_to)
    counts: Counter = Counter()
    for v in set(g_from) | set(g_to):
        counts[(g_from.get(v, INACTIVE), g_to.get(v, INACTIVE))] += 1
    return sorted((a, b, c) for (a, b), c in counts.items())
