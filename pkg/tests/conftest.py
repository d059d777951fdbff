import itertools

import numpy as np
import pytest

from graphmerge.gf2 import BitMat
from graphmerge.graphs import Graph, Partition


def all_graphs(n):
    """Every simple graph on n labeled vertices."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for mask in range(2 ** len(pairs)):
        yield Graph(n, [pairs[k] for k in range(len(pairs)) if (mask >> k) & 1])


def all_partitions(g):
    """Every honest subset of g's vertices (including the trivial ones)."""
    for hmask in range(2**g.n):
        honest = [v for v in range(g.n) if (hmask >> v) & 1]
        yield Partition.from_honest(g, honest)


def proper_partitions(g):
    for p in all_partitions(g):
        if 0 < p.n_h < g.n:
            yield p


def random_bitmat(rng, rows, cols) -> BitMat:
    return BitMat(rng.integers(0, 2, (rows, cols)))


def random_invertible(rng, n) -> BitMat:
    from graphmerge.gf2 import rank

    while True:
        m = random_bitmat(rng, n, n)
        if rank(m) == n:
            return m


def random_graph(rng, n) -> Graph:
    a = np.triu(rng.integers(0, 2, (n, n)), 1)
    return Graph(n, adj=BitMat(a | a.T))


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


TRIANGLE = Graph(3, [(0, 1), (1, 2), (0, 2)])
PATH3 = Graph(3, [(0, 1), (1, 2)])
EDGE = Graph(2, [(0, 1)])
