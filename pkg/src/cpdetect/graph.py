"""Immutable undirected binary networks.

Node identifiers are opaque strings. Internally every node gets a dense
index given by the sorted order of its identifier, so two networks built
from the same edge set are equal regardless of input order.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "DegenerateNetworkError",
    "Network",
    "build_network",
    "density",
    "induced_subgraph",
    "sample_er",
    "read_edge_list",
    "write_edge_list",
    "read_attributes",
]


class DegenerateNetworkError(ValueError):
    """Raised when a network is too small or too trivial for an operation."""


def _normalize_pairs(n: int, pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ValueError("edge endpoint index out of range")
    arr = arr[arr[:, 0] != arr[:, 1]]
    arr = np.sort(arr, axis=1)
    if len(arr):
        arr = np.unique(arr, axis=0)
    return arr


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected simple graph without self-loops.

    Parameters
    ----------
    node_ids : sequence of str
        Node identifiers; index ``i`` in ``edges`` refers to ``node_ids[i]``.
    edges : array_like, shape (M, 2)
        Index pairs. Direction, duplicates and self-pairs are discarded.
    attributes : mapping, optional
        Node id -> categorical label (e.g. ``"IT"`` / ``"foreign"``).
    """

    node_ids: tuple[str, ...]
    edges: np.ndarray
    attributes: Mapping[str, str] | None = field(default=None)

    def __post_init__(self):
        ids = tuple(str(v) for v in self.node_ids)
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate node identifiers")
        edges = _normalize_pairs(len(ids), self.edges)
        edges.setflags(write=False)
        object.__setattr__(self, "node_ids", ids)
        object.__setattr__(self, "edges", edges)
        if self.attributes is not None:
            known = set(ids)
            attrs = {str(k): str(v) for k, v in self.attributes.items() if str(k) in known}
            object.__setattr__(self, "attributes", attrs)

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_pairs(self) -> int:
        """Number of unordered node pairs, N(N-1)/2."""
        n = self.n_nodes
        return n * (n - 1) // 2

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.node_ids)}

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense symmetric boolean adjacency matrix (read-only)."""
        a = np.zeros((self.n_nodes, self.n_nodes), dtype=bool)
        if self.n_edges:
            a[self.edges[:, 0], self.edges[:, 1]] = True
            a[self.edges[:, 1], self.edges[:, 0]] = True
        a.setflags(write=False)
        return a

    @cached_property
    def neighbors(self) -> tuple[np.ndarray, ...]:
        a = self.adjacency
        return tuple(np.flatnonzero(a[i]) for i in range(self.n_nodes))

    @cached_property
    def degrees(self) -> np.ndarray:
        d = self.adjacency.sum(axis=1).astype(np.int64)
        d.setflags(write=False)
        return d

    def edge_list(self) -> list[tuple[str, str]]:
        ids = self.node_ids
        return [(ids[i], ids[j]) for i, j in self.edges.tolist()]

    def has_edge(self, u: str, v: str) -> bool:
        return bool(self.adjacency[self.index[u], self.index[v]])

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.node_ids == other.node_ids
            and np.array_equal(self.edges, other.edges)
            and (self.attributes or None) == (other.attributes or None)
        )

    def __hash__(self):
        return hash((self.node_ids, self.edges.tobytes()))

    def __repr__(self):
        return f"Network(N={self.n_nodes}, M={self.n_edges})"


def build_network(
    edges: Iterable[tuple[object, object]],
    attributes: Mapping[str, str] | None = None,
    nodes: Iterable[object] = (),
) -> Network:
    """Build a network from node-id pairs.

    ``(a, b)`` and ``(b, a)`` collapse into one edge and self-pairs are
    dropped; every endpoint (self-pairs included) becomes a node. Extra
    isolated nodes may be passed through ``nodes``.
    """
    pairs = [(str(u), str(v)) for u, v in edges]
    if not pairs:
        raise DegenerateNetworkError("empty edge sequence: degenerate window")
    ids = sorted({v for p in pairs for v in p} | {str(v) for v in nodes})
    index = {v: i for i, v in enumerate(ids)}
    idx = np.array([(index[u], index[v]) for u, v in pairs], dtype=np.int64)
    return Network(tuple(ids), idx, attributes)


def density(net: Network) -> float:
    """Fraction of node pairs that are adjacent."""
    if net.n_nodes < 2:
        raise DegenerateNetworkError("density needs at least two nodes")
    return net.n_edges / net.n_pairs


def induced_subgraph(net: Network, nodes: Iterable[str]) -> Network:
    """Subgraph on ``nodes``; nodes left isolated are kept."""
    wanted = {str(v) for v in nodes}
    unknown = wanted - set(net.index)
    if unknown:
        raise KeyError(f"unknown node ids: {sorted(unknown)}")
    keep = np.array(sorted(net.index[v] for v in wanted), dtype=np.int64)
    remap = np.full(net.n_nodes, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    e = net.edges
    mask = (remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0) if len(e) else np.zeros(0, bool)
    sub_edges = remap[e[mask]] if len(e) else np.zeros((0, 2), np.int64)
    ids = tuple(net.node_ids[i] for i in keep)
    attrs = None
    if net.attributes is not None:
        attrs = {v: net.attributes[v] for v in ids if v in net.attributes}
    return Network(ids, sub_edges, attrs)


def _er_edges(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"edge count {m} outside [0, {total}] for n={n}")
    rows, cols = np.triu_indices(n, 1)
    pick = np.sort(rng.choice(total, size=m, replace=False))
    return np.column_stack([rows[pick], cols[pick]])


def sample_er(n: int, m: int, seed=None) -> Network:
    """Uniform sample from all simple graphs with ``n`` nodes and ``m`` edges."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.default_rng(seed)
    edges = _er_edges(n, m, rng)
    width = len(str(max(n - 1, 0)))
    ids = tuple(f"v{i:0{width}d}" for i in range(n))
    return Network(ids, edges)


def read_edge_list(path: str | os.PathLike, attributes: Mapping[str, str] | None = None) -> Network:
    """Read a whitespace-separated two-column edge list.

    Blank lines and lines starting with ``#`` are ignored.
    """
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two node ids, got {len(parts)} fields")
            pairs.append((parts[0], parts[1]))
    return build_network(pairs, attributes)


def write_edge_list(net: Network, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        for u, v in net.edge_list():
            fh.write(f"{u} {v}\n")


def read_attributes(path: str | os.PathLike) -> dict[str, str]:
    """Read a ``node_id,attribute`` CSV (header optional)."""
    import csv

    attrs: dict[str, str] = {}
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip():
                continue
            if lineno == 1 and [c.strip() for c in row] == ["node_id", "attribute"]:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected node_id,attribute")
            attrs[row[0].strip()] = row[1].strip()
    return attrs
