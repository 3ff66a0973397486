"""Labelings of nodes into core-periphery pairs, and their JSON form."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .graph import Network

__all__ = [
    "Labeling",
    "SinglePairAssignment",
    "canonicalize",
    "core_vector",
    "labeling_to_json",
    "labeling_from_json",
    "write_labeling",
    "read_labeling",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1


def canonicalize(pairs: np.ndarray) -> np.ndarray:
    """Relabel pair ids to 1..C by decreasing size, ties by smallest node index."""
    pairs = np.asarray(pairs)
    uniq, first, counts = np.unique(pairs, return_index=True, return_counts=True)
    order = sorted(range(len(uniq)), key=lambda t: (-counts[t], first[t]))
    lookup = {uniq[t]: rank + 1 for rank, t in enumerate(order)}
    return np.array([lookup[p] for p in pairs.tolist()], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Labeling:
    """Assignment of every node to a pair ``c_i`` (1..C) and a coreness ``x_i``.

    Arrays are aligned with ``node_ids``. ``significant`` is ``None`` until a
    significance test has been run; afterwards ``False`` marks residual nodes.
    """

    node_ids: tuple[str, ...]
    pairs: np.ndarray
    core: np.ndarray
    q_value: float = float("nan")
    significant: np.ndarray | None = None
    algorithm: str = ""
    _canonical: bool = field(default=True, repr=False)

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.int64)
        core = np.asarray(self.core, dtype=bool)
        if pairs.shape != (len(self.node_ids),) or core.shape != pairs.shape:
            raise ValueError("pairs and core must align with node_ids")
        if self._canonical and len(pairs):
            pairs = canonicalize(pairs)
        object.__setattr__(self, "node_ids", tuple(str(v) for v in self.node_ids))
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "core", core)
        if self.significant is not None:
            sig = np.asarray(self.significant, dtype=bool)
            if sig.shape != pairs.shape:
                raise ValueError("significant must align with node_ids")
            object.__setattr__(self, "significant", sig)
        object.__setattr__(self, "_canonical", True)

    @classmethod
    def from_mappings(
        cls,
        pair_index: Mapping[str, int],
        coreness: Mapping[str, int | bool],
        net: Network,
        **kwargs,
    ) -> "Labeling":
        missing = [v for v in net.node_ids if v not in pair_index or v not in coreness]
        if missing:
            raise KeyError(f"labeling misses nodes: {missing}")
        pairs = [int(pair_index[v]) for v in net.node_ids]
        core = [bool(coreness[v]) for v in net.node_ids]
        return cls(net.node_ids, pairs, core, **kwargs)

    @property
    def pair_count(self) -> int:
        return int(self.pairs.max()) if len(self.pairs) else 0

    @property
    def pair_index(self) -> dict[str, int]:
        return dict(zip(self.node_ids, self.pairs.tolist()))

    @property
    def coreness(self) -> dict[str, int]:
        return dict(zip(self.node_ids, self.core.astype(int).tolist()))

    def members(self, k: int) -> np.ndarray:
        """Node indices of pair ``k``."""
        return np.flatnonzero(self.pairs == k)

    def core_nodes(self, k: int) -> set[str]:
        return {self.node_ids[i] for i in np.flatnonzero((self.pairs == k) & self.core)}

    def periphery_nodes(self, k: int) -> set[str]:
        return {self.node_ids[i] for i in np.flatnonzero((self.pairs == k) & ~self.core)}

    def pair_significant(self, k: int) -> bool | None:
        if self.significant is None:
            return None
        idx = self.members(k)
        return bool(self.significant[idx].all()) if len(idx) else None

    def aligned(self, net: Network) -> "Labeling":
        """Return this labeling reordered to ``net``'s node order."""
        if self.node_ids == net.node_ids:
            return self
        pos = {v: i for i, v in enumerate(self.node_ids)}
        missing = [v for v in net.node_ids if v not in pos]
        if missing:
            raise KeyError(f"labeling misses nodes: {missing}")
        order = np.array([pos[v] for v in net.node_ids], dtype=np.int64)
        sig = None if self.significant is None else self.significant[order]
        return replace(self, node_ids=net.node_ids, pairs=self.pairs[order], core=self.core[order], significant=sig)

    def same_structure(self, other: "Labeling") -> bool:
        """Equal partition and coreness, up to permutation of pair ids."""
        if set(self.node_ids) != set(other.node_ids):
            return False
        pos = {v: i for i, v in enumerate(other.node_ids)}
        order = [pos[v] for v in self.node_ids]
        o_pairs, o_core = other.pairs[order], other.core[order]
        if not np.array_equal(self.core, o_core):
            return False
        mapping: dict[int, int] = {}
        back: dict[int, int] = {}
        for a, b in zip(self.pairs.tolist(), o_pairs.tolist()):
            if mapping.setdefault(a, b) != b or back.setdefault(b, a) != a:
                return False
        return True


@dataclass(frozen=True, eq=False)
class SinglePairAssignment:
    """Result of a single core-periphery detector (BE or MINRES).

    ``quality`` is the correlation quality when it is defined, else ``None``.
    ``cost`` is only set by MINRES.
    """

    node_ids: tuple[str, ...]
    core: np.ndarray
    quality: float | None
    algorithm: str
    cost: int | None = None

    @property
    def coreness(self) -> dict[str, int]:
        return dict(zip(self.node_ids, np.asarray(self.core, dtype=int).tolist()))

    @property
    def n_core(self) -> int:
        return int(np.count_nonzero(self.core))

    def to_labeling(self, net: Network) -> Labeling:
        from .kmer import qcp  # local import: kmer depends on this module

        lab = Labeling(self.node_ids, np.ones(len(self.node_ids), np.int64), self.core, algorithm=self.algorithm)
        return replace(lab, q_value=qcp(lab, net))


def core_vector(assign, net: Network) -> np.ndarray:
    """Coerce a coreness mapping, array or assignment to a boolean vector in ``net`` order."""
    if isinstance(assign, SinglePairAssignment):
        assign = dict(zip(assign.node_ids, np.asarray(assign.core).tolist()))
    if isinstance(assign, Mapping):
        missing = [v for v in net.node_ids if v not in assign]
        if missing:
            raise KeyError(f"assignment misses nodes: {missing}")
        vals = [assign[v] for v in net.node_ids]
        out = np.array([v in (1, True, "core", "c") for v in vals], dtype=bool)
        return out
    out = np.asarray(assign).astype(bool)
    if out.shape != (net.n_nodes,):
        raise ValueError("assignment must cover all nodes")
    return out


def labeling_to_json(lab: Labeling, window: str, seed: int | None) -> str:
    """Serialize to the schema-1 labeling document (stable byte output)."""
    nodes = []
    for i, v in enumerate(lab.node_ids):
        sig = None if lab.significant is None else bool(lab.significant[i])
        nodes.append({"id": v, "pair": int(lab.pairs[i]), "core": bool(lab.core[i]), "significant": sig})
    q = None if np.isnan(lab.q_value) else float(lab.q_value)
    doc = {
        "schema": SCHEMA_VERSION,
        "window": window,
        "algorithm": lab.algorithm,
        "seed": seed,
        "q_value": q,
        "nodes": nodes,
    }
    return json.dumps(doc, indent=2) + "\n"


def labeling_from_json(text: str) -> tuple[Labeling, dict]:
    """Parse a labeling document; returns the labeling and the raw header fields."""
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported labeling schema {doc.get('schema')!r}")
    nodes = doc["nodes"]
    ids = [n["id"] for n in nodes]
    sig_vals = [n.get("significant") for n in nodes]
    sig = None if any(s is None for s in sig_vals) else sig_vals
    q = doc.get("q_value")
    lab = Labeling(
        ids,
        [n["pair"] for n in nodes],
        [n["core"] for n in nodes],
        q_value=float("nan") if q is None else float(q),
        significant=sig,
        algorithm=doc.get("algorithm", ""),
        _canonical=False,
    )
    header = {k: v for k, v in doc.items() if k != "nodes"}
    return lab, header


def write_labeling(lab: Labeling, path: str | os.PathLike, window: str, seed: int | None) -> None:
    with open(path, "w") as fh:
        fh.write(labeling_to_json(lab, window, seed))


def read_labeling(path: str | os.PathLike) -> tuple[Labeling, dict]:
    with open(path) as fh:
        return labeling_from_json(fh.read())
