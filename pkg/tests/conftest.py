"""Shared helpers: independent oracles and random graph generators.

The oracles deliberately use plain numpy inverses and pseudoinverses on
matrices assembled from scratch, so they share no code path with the
package's Cholesky / triangular / forest-elimination routes.
"""

import numpy as np
import pytest

from coherence_lab import Graph, build_graph


def dense_laplacian(g: Graph) -> np.ndarray:
    L = np.zeros((g.node_count, g.node_count))
    for u, v, w in g.edges:
        L[u, u] += w
        L[v, v] += w
        L[u, v] -= w
        L[v, u] -= w
    return L


def naive_resistance(g: Graph, i: int, j: int) -> float:
    """Definitional oracle: (i, i) entry of the inverse with j grounded."""
    keep = [v for v in range(g.node_count) if v != j]
    Lj = dense_laplacian(g)[np.ix_(keep, keep)]
    return float(np.linalg.inv(Lj)[keep.index(i), keep.index(i)])


def naive_resistance_to_set(g: Graph, i: int, S) -> float:
    S = set(S)
    keep = [v for v in range(g.node_count) if v not in S]
    Lff = dense_laplacian(g)[np.ix_(keep, keep)]
    return float(np.linalg.inv(Lff)[keep.index(i), keep.index(i)])


def naive_nf_value(g: Graph, S) -> float:
    """Half the trace of the inverse grounded Laplacian, by plain inv."""
    S = set(S)
    keep = [v for v in range(g.node_count) if v not in S]
    if not keep:
        return 0.0
    Lff = dense_laplacian(g)[np.ix_(keep, keep)]
    return 0.5 * float(np.trace(np.linalg.inv(Lff)))


def naive_nc_value(g: Graph, S, kappa=1.0) -> float:
    M = dense_laplacian(g)
    for v in sorted(set(S)):
        kv = kappa.get(v, 1.0) if isinstance(kappa, dict) else kappa
        M[v, v] += kv
    return 0.5 * float(np.trace(np.linalg.inv(M)))


def naive_resistance_table(g: Graph) -> np.ndarray:
    """Pairwise resistances from the Laplacian pseudoinverse."""
    P = np.linalg.pinv(dense_laplacian(g))
    d = np.diag(P)
    R = d[:, None] + d[None, :] - 2.0 * P
    np.fill_diagonal(R, 0.0)
    return R


def random_connected_graph(rng, n: int, extra_edges: int = 0,
                           weighted: bool = True) -> Graph:
    """Random spanning tree plus extra chords, positive random weights."""
    def weight():
        return float(rng.uniform(0.2, 3.0)) if weighted else 1.0

    edges = {}
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges[(u, v)] = weight()
    attempts = 0
    while len(edges) < n - 1 + extra_edges and attempts < 50 * (extra_edges + 1):
        attempts += 1
        u, v = rng.integers(0, n, size=2)
        u, v = int(min(u, v)), int(max(u, v))
        if u != v and (u, v) not in edges:
            edges[(u, v)] = weight()
    return build_graph([(u, v, w) for (u, v), w in edges.items()], node_count=n)


def random_tree(rng, n: int, weighted: bool = True) -> Graph:
    return random_connected_graph(rng, n, extra_edges=0, weighted=weighted)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
