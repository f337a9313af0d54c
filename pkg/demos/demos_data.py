"""Small hypergraphs shared by the demo scripts."""
from itertools import combinations

import numpy as np

from hgsp import Hypergraph


def small_hypergraph():
    return Hypergraph(7, ((0, 3, 5), (1, 2, 6), (4, 5, 6), (0, 1)))


def two_cliques():
    edges = list(combinations(range(4), 3)) + list(combinations(range(4, 8), 3))
    return Hypergraph(8, tuple(edges))


def planted(seed, n=12, p_in=0.6, p_out=0.05):
    rng = np.random.default_rng(seed)
    block = np.repeat([0, 1], [n // 2, n - n // 2])
    edges = [e for e in combinations(range(n), 3)
             if rng.random() < (p_in if len(set(block[list(e)])) == 1 else p_out)]
    return Hypergraph(n, tuple(edges)), block
