"""Hypergraph model and its adjacency / Laplacian tensors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial

import numpy as np
from scipy.spatial.distance import cdist

from .symtensor import SymTensor, contract_vector


@dataclass(frozen=True)
class Hypergraph:
    """``num_nodes`` nodes and a list of hyperedges (0-based node ids).

    Hyperedges are stored as sorted tuples.  Each must have at least two
    distinct nodes; duplicate hyperedges are rejected.
    """

    num_nodes: int
    hyperedges: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        n = int(self.num_nodes)
        if n < 1:
            raise ValueError(f"num_nodes must be >= 1, got {self.num_nodes}")
        edges = []
        seen = set()
        for pos, edge in enumerate(self.hyperedges):
            nodes = [int(v) for v in edge]
            if len(set(nodes)) != len(nodes):
                raise ValueError(f"hyperedge {pos} repeats a node: {list(edge)}")
            if len(nodes) < 2:
                raise ValueError(f"hyperedge {pos} has fewer than two nodes: {list(edge)}")
            if min(nodes) < 0 or max(nodes) >= n:
                raise ValueError(f"hyperedge {pos} has a node outside [0, {n - 1}]: {list(edge)}")
            key = tuple(sorted(nodes))
            if key in seen:
                raise ValueError(f"hyperedge {pos} duplicates an earlier hyperedge: {list(edge)}")
            seen.add(key)
            edges.append(key)
        object.__setattr__(self, "num_nodes", n)
        object.__setattr__(self, "hyperedges", tuple(edges))

    @property
    def mce(self) -> int:
        """Maximum hyperedge cardinality (2 for an edgeless hypergraph)."""
        return max((len(e) for e in self.hyperedges), default=2)

    def __len__(self):
        return len(self.hyperedges)


@lru_cache(maxsize=None)
def edge_weight_exact(cardinality: int, order: int) -> Fraction:
    """Exact adjacency weight of a ``cardinality``-node hyperedge in an order-``order`` tensor.

    ``c / sum(M! / (k_1! ... k_c!))`` over all compositions ``k`` of ``M`` into
    ``c`` positive parts.  The sum counts the ordered ``M``-tuples that use
    every node of the edge, so each node's degree comes out as exactly one
    per incident hyperedge.
    """
    c, m = int(cardinality), int(order)
    if not 1 <= c <= m:
        raise ValueError(f"cardinality {c} must lie in [1, {m}]")

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    denom = 0
    for ks in compositions(m, c):
        term = factorial(m)
        for k in ks:
            term //= factorial(k)
        denom += term
    return Fraction(c, denom)


def edge_weight(cardinality: int, order: int) -> float:
    return float(edge_weight_exact(cardinality, order))


def adjacency_tensor(h: Hypergraph, order: int | None = None) -> SymTensor:
    """Order-``M`` adjacency tensor, ``M = h.mce`` unless ``order`` is given.

    A hyperedge ``e`` with ``c`` nodes fills every sorted multiset of size
    ``M`` that contains each node of ``e`` at least once.
    """
    m = h.mce if order is None else int(order)
    if m < h.mce:
        raise ValueError(f"order {m} is smaller than the largest hyperedge ({h.mce})")
    entries = {}
    for edge in h.hyperedges:
        w = edge_weight(len(edge), m)
        for extra in combinations_with_replacement(edge, m - len(edge)):
            entries[tuple(sorted(edge + extra))] = w
    return SymTensor(m, h.num_nodes, entries)


def degree_vector(a: SymTensor) -> np.ndarray:
    """Row sums ``d_i = sum_{j...} a[i, j...]``."""
    return contract_vector(a, np.ones(a.dim))


def laplacian_tensor(h: Hypergraph, order: int | None = None) -> SymTensor:
    """``D - A`` with ``D`` super-diagonal holding the node degrees."""
    a = adjacency_tensor(h, order)
    d = degree_vector(a)
    diag = SymTensor(a.order, a.dim, {(i,) * a.order: d[i] for i in range(a.dim)})
    return diag - a


def build_knn_hypergraph(features, m: int, metric: str = "euclidean") -> Hypergraph:
    """One hyperedge per node: the node plus its ``m - 1`` nearest neighbours.

    Distance ties go to the lower node index.  Repeated node sets are kept
    once, in first-seen order.
    """
    x = np.asarray(features, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"features must be a 2-D array, got shape {x.shape}")
    n = x.shape[0]
    m = int(m)
    if m < 2 or m > n:
        raise ValueError(f"m must satisfy 2 <= m <= N = {n}, got {m}")
    if metric != "euclidean":
        raise ValueError(f"unsupported metric {metric!r}")
    if len(np.unique(x, axis=0)) < m:
        raise ValueError(f"need at least m = {m} distinct points")
    dist = cdist(x, x)
    edges, seen = [], set()
    for i in range(n):
        d = dist[i].copy()
        d[i] = -np.inf
        # lexsort: last key is primary
        order = np.lexsort((np.arange(n), d))
        edge = tuple(sorted(int(j) for j in order[:m]))
        if edge not in seen:
            seen.add(edge)
            edges.append(edge)
    return Hypergraph(n, tuple(edges))
