"""Deterministic graph generators for experiments and test suites.

Every generator is a pure function of its parameters and seed. Seeds feed
numpy's PCG64 generator, so the same call always yields the same graph.
"""

from __future__ import annotations

import numpy as np

from .graph import SignedGraph

__all__ = [
    "gen_path",
    "gen_star",
    "gen_clique",
    "gen_barbell",
    "gen_gnp",
    "gen_forest",
    "gen_arboric",
    "gen_bounded_degree",
    "gen_regularish",
]


def gen_path(n: int) -> SignedGraph:
    return SignedGraph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def gen_star(n: int) -> SignedGraph:
    """Center 0 joined to leaves 1..n-1."""
    return SignedGraph.from_edges(n, ((0, i) for i in range(1, n)))


def gen_clique(n: int) -> SignedGraph:
    return SignedGraph.from_edges(
        n, ((i, j) for i in range(n) for j in range(i + 1, n))
    )


def gen_barbell(k: int) -> SignedGraph:
    """Two k-cliques joined by a single bridge edge (2k vertices)."""
    if k < 1:
        raise ValueError("clique size must be positive")
    edges = []
    for base in (0, k):
        edges.extend(
            (base + i, base + j) for i in range(k) for j in range(i + 1, k)
        )
    edges.append((k - 1, k))
    return SignedGraph.from_edges(2 * k, edges)


def gen_gnp(n: int, p: float, seed) -> SignedGraph:
    """Erdos-Renyi positive graph with edge probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        draws = rng.random(n - i - 1)
        for off, x in enumerate(draws):
            if x < p:
                edges.append((i, i + 1 + off))
    return SignedGraph.from_edges(n, edges)


def _random_tree_edges(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Uniform-attachment spanning tree over a shuffled vertex order."""
    order = [int(v) for v in rng.permutation(n)]
    edges = []
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges.append((order[i], order[j]))
    return edges


def gen_forest(n: int, m: int | None = None, seed=0) -> SignedGraph:
    """Random forest with m edges (default n-1, a spanning tree).

    Builds a random spanning tree and keeps a random m-subset of its edges,
    so the result is always acyclic.
    """
    if n == 0:
        return SignedGraph.from_edges(0, [])
    if m is None:
        m = n - 1
    if not (0 <= m <= n - 1):
        raise ValueError(f"a forest on {n} vertices has at most {n - 1} edges")
    rng = np.random.default_rng(seed)
    tree = _random_tree_edges(n, rng)
    keep = rng.permutation(len(tree))[:m]
    return SignedGraph.from_edges(n, (tree[i] for i in sorted(int(k) for k in keep)))


def gen_arboric(n: int, lam: int, seed=0) -> SignedGraph:
    """Union of lam random spanning trees; arboricity at most lam by
    construction."""
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    for _ in range(lam):
        edges.extend(_random_tree_edges(n, rng))
    return SignedGraph.from_edges(n, edges)


def gen_bounded_degree(n: int, max_degree: int, m: int, seed=0) -> SignedGraph:
    """Random graph with at most m edges and maximum degree capped.

    Samples random pairs and keeps one while both endpoints are under the
    cap; the returned graph always satisfies the degree bound, the edge
    count may fall short on dense requests.
    """
    rng = np.random.default_rng(seed)
    deg = [0] * n
    chosen: set[tuple[int, int]] = set()
    attempts = 0
    limit = 20 * m + 100
    while len(chosen) < m and attempts < limit:
        attempts += 1
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u == v:
            continue
        e = (u, v) if u < v else (v, u)
        if e in chosen or deg[u] >= max_degree or deg[v] >= max_degree:
            continue
        chosen.add(e)
        deg[u] += 1
        deg[v] += 1
    return SignedGraph.from_edges(n, chosen)


def gen_regularish(n: int, d: int, seed=0) -> SignedGraph:
    """Near-d-regular graph as a union of d random perfect matchings.

    Self-pairs cannot occur; duplicate edges across matchings are merged,
    so degrees are at most d and usually exactly d. Requires even n.
    """
    if n % 2:
        raise ValueError("regularish generator needs an even vertex count")
    rng = np.random.default_rng(seed)
    edges: set[tuple[int, int]] = set()
    for _ in range(d):
        perm = rng.permutation(n)
        for i in range(0, n, 2):
            u, v = int(perm[i]), int(perm[i + 1])
            edges.add((u, v) if u < v else (v, u))
    return SignedGraph.from_edges(n, edges)
