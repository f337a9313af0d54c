import itertools

import numpy as np
import pytest

from hgsp import Hypergraph, SymTensor

# 0-based versions of the two seven-node examples used throughout
TRIPLE_EDGES = ((0, 3, 5), (1, 2, 6), (4, 5, 6))
MIXED_EDGES = ((0, 3, 5), (1, 2), (4, 5, 6))


@pytest.fixture
def triples7():
    return Hypergraph(7, TRIPLE_EDGES)


@pytest.fixture
def mixed7():
    return Hypergraph(7, MIXED_EDGES)


def dense_adjacency_oracle(n, edges, order):
    """Enumerate all N^M index tuples; weight from a brute-force surjection count."""
    arr = np.zeros((n,) * order)
    weights = {}
    for e in edges:
        c = len(e)
        surj = sum(1 for tup in itertools.product(range(c), repeat=order) if len(set(tup)) == c)
        weights[frozenset(e)] = c / surj
    for idx in itertools.product(range(n), repeat=order):
        w = weights.get(frozenset(idx))
        if w is not None:
            arr[idx] = w
    return arr


def dense_contract(arr, s):
    """``sum_{j...} arr[i, j...] s_j ...`` by explicit tensordot, no sparse code."""
    out = np.asarray(arr, dtype=float)
    for _ in range(out.ndim - 1):
        out = np.tensordot(out, s, axes=([out.ndim - 1], [0]))
    return out


def random_hypergraph(rng, n, order, n_edges=None, uniform=False):
    """Random hypergraph on ``n`` nodes whose largest edge has exactly ``order`` nodes."""
    sizes = list(range(2, order + 1))
    edges = {tuple(sorted(rng.choice(n, size=order, replace=False).tolist()))}
    n_edges = n_edges if n_edges is not None else int(rng.integers(1, 2 * n))
    for _ in range(n_edges * 3):
        if len(edges) >= n_edges:
            break
        c = order if uniform else int(rng.choice(sizes))
        edges.add(tuple(sorted(rng.choice(n, size=c, replace=False).tolist())))
    return Hypergraph(n, tuple(sorted(edges)))


def random_orthonormal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def odeco_tensor(weights, vectors, order):
    """Dense ``sum_r w_r v_r^(o M)`` built with ``np.multiply.outer``."""
    n = vectors.shape[1]
    arr = np.zeros((n,) * order)
    for w, v in zip(weights, vectors):
        outer = v
        for _ in range(order - 1):
            outer = np.multiply.outer(outer, v)
        arr += w * outer
    return SymTensor.from_dense(arr)


def match_up_to_sign(a, b):
    """Largest entrywise gap between vectors ``a`` and ``+/- b``."""
    return min(np.max(np.abs(a - b)), np.max(np.abs(a + b)))


def planted_two_block(seed, n=12, p_in=0.6, p_out=0.05):
    """3-uniform hypergraph with two equal blocks; returns ``(h, block)``."""
    rng = np.random.default_rng(seed)
    block = np.array([0] * (n // 2) + [1] * (n - n // 2))
    edges = []
    for e in itertools.combinations(range(n), 3):
        same = len(set(block[list(e)])) == 1
        if rng.random() < (p_in if same else p_out):
            edges.append(e)
    return Hypergraph(n, tuple(edges)), block, rng


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
