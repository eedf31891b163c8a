"""Core data model: signed graphs, vertex orderings, clusterings, and costs.

A complete signed graph on ``n`` vertices is stored through its positive
edge set; every vertex pair that is not a positive edge is implicitly a
negative edge. Vertices are dense integers ``0..n-1``. All structures are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "GraphFormatError",
    "SignedGraph",
    "VertexOrdering",
    "Clustering",
    "DegreeProfile",
    "ArboricityEstimate",
    "load_graph",
    "loads_graph",
    "cost",
    "degree_profile",
    "estimate_arboricity",
    "bad_triangle_packing",
]


class GraphFormatError(ValueError):
    """Malformed edge-list input; carries the 1-based offending line number."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class SignedGraph:
    """Complete signed graph given by its positive edges.

    Negative edges are never materialized: a pair {u, v} is negative exactly
    when it is not in the positive edge set. Adjacency lists are sorted
    tuples, so instances hash-stably describe the same graph.
    """

    __slots__ = ("n", "_adj", "_m")

    def __init__(self, n: int, adjacency: tuple[tuple[int, ...], ...], m: int):
        self.n = n
        self._adj = adjacency
        self._m = m

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SignedGraph":
        """Build a graph from undirected pairs, deduplicating symmetric repeats."""
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has endpoint outside 0..{n - 1}")
            seen.add((u, v) if u < v else (v, u))
        buckets: list[list[int]] = [[] for _ in range(n)]
        for u, v in seen:
            buckets[u].append(v)
            buckets[v].append(u)
        adjacency = tuple(tuple(sorted(b)) for b in buckets)
        return cls(n, adjacency, len(seen))

    @property
    def m(self) -> int:
        """Number of positive edges."""
        return self._m

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self._adj[u]
        lo, hi = 0, len(a)
        while lo < hi:
            mid = (lo + hi) // 2
            if a[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(a) and a[lo] == v

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each positive edge once as (u, v) with u < v."""
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges())

    def induced(self, vertices: Iterable[int]) -> tuple["SignedGraph", tuple[int, ...]]:
        """Induced subgraph on ``vertices``.

        Returns the subgraph on compacted ids plus the map from new id to the
        original vertex id (sorted by original id).
        """
        keep = sorted(set(vertices))
        index = {old: new for new, old in enumerate(keep)}
        edges = [
            (index[u], index[v])
            for u, v in self.edges()
            if u in index and v in index
        ]
        return SignedGraph.from_edges(len(keep), edges), tuple(keep)

    def is_forest(self) -> bool:
        """True when the positive graph is acyclic."""
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges():
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def connected_components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SignedGraph)
            and self.n == other.n
            and self._adj == other._adj
        )

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"SignedGraph(n={self.n}, m={self._m})"


def load_graph(source: Iterable[str], n: int) -> SignedGraph:
    """Parse an edge-list text stream into a :class:`SignedGraph`.

    Each non-empty line holds two distinct vertex ids separated by
    whitespace. ``#`` starts a comment that runs to the end of the line.
    Symmetric duplicates are merged. Raises :class:`GraphFormatError` with
    the offending line number on malformed input.
    """
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(source, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        if len(parts) != 2:
            raise GraphFormatError(
                f"expected two vertex ids, got {len(parts)} tokens", line_no
            )
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex id in {parts!r}", line_no)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", line_no)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(
                f"vertex id outside 0..{n - 1} in edge ({u}, {v})", line_no
            )
        edges.append((u, v))
    return SignedGraph.from_edges(n, edges)


def loads_graph(text: str, n: int) -> SignedGraph:
    return load_graph(text.splitlines(), n)


class VertexOrdering:
    """A permutation of the vertex set driving greedy processing.

    ``pi[r]`` is the vertex holding rank ``r``; ``rank[v]`` is the inverse.
    """

    __slots__ = ("pi", "rank")

    def __init__(self, pi: Iterable[int]):
        pi_t = tuple(pi)
        n = len(pi_t)
        rank = [-1] * n
        for r, v in enumerate(pi_t):
            if not (0 <= v < n) or rank[v] != -1:
                raise ValueError("ordering is not a permutation of 0..n-1")
            rank[v] = r
        self.pi = pi_t
        self.rank = tuple(rank)

    @classmethod
    def random(cls, n: int, seed) -> "VertexOrdering":
        """Uniform permutation from a seeded 64-bit generator (PCG64)."""
        rng = np.random.default_rng(seed)
        return cls(int(v) for v in rng.permutation(n))

    @classmethod
    def identity(cls, n: int) -> "VertexOrdering":
        return cls(range(n))

    def restrict(self, vertices: Iterable[int], relabel: dict[int, int] | None = None) -> "VertexOrdering":
        """Ordering induced on a vertex subset, optionally relabeled.

        Relative order is preserved. With ``relabel`` the returned ordering
        is over the new ids (the map must be a bijection onto 0..k-1).
        """
        keep = set(vertices)
        seq = [v for v in self.pi if v in keep]
        if relabel is not None:
            seq = [relabel[v] for v in seq]
        else:
            comp = {v: i for i, v in enumerate(sorted(keep))}
            seq = [comp[v] for v in seq]
        return VertexOrdering(seq)

    def __len__(self) -> int:
        return len(self.pi)

    def __repr__(self) -> str:
        return f"VertexOrdering(pi={self.pi!r})"


class Clustering:
    """A partition of 0..n-1, stored as a per-vertex cluster label.

    Labels are arbitrary; two clusterings are the same partition when their
    canonical forms match.
    """

    __slots__ = ("assignment",)

    def __init__(self, assignment: Iterable[int]):
        self.assignment = tuple(assignment)

    @classmethod
    def singletons(cls, n: int) -> "Clustering":
        return cls(range(n))

    @classmethod
    def one_cluster(cls, n: int) -> "Clustering":
        return cls([0] * n)

    @classmethod
    def from_clusters(cls, n: int, clusters: Iterable[Iterable[int]]) -> "Clustering":
        assignment = [-1] * n
        for cid, members in enumerate(clusters):
            for v in members:
                if assignment[v] != -1:
                    raise ValueError(f"vertex {v} appears in two clusters")
                assignment[v] = cid
        if any(a == -1 for a in assignment):
            missing = [v for v, a in enumerate(assignment) if a == -1]
            raise ValueError(f"vertices {missing} not covered by any cluster")
        return cls(assignment)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def clusters(self) -> list[list[int]]:
        """Clusters as sorted vertex lists, ordered by smallest member."""
        by_label: dict[int, list[int]] = {}
        for v, c in enumerate(self.assignment):
            by_label.setdefault(c, []).append(v)
        return sorted(by_label.values(), key=lambda c: c[0])

    def canonical(self) -> tuple[int, ...]:
        """Relabel clusters by first occurrence; equal iff same partition."""
        relabel: dict[int, int] = {}
        out = []
        for c in self.assignment:
            if c not in relabel:
                relabel[c] = len(relabel)
            out.append(relabel[c])
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Clustering) and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        return f"Clustering(assignment={self.assignment!r})"


def cost(g: SignedGraph, clustering: Clustering) -> int:
    """Number of disagreements of a clustering.

    Counts positive edges whose endpoints are split across clusters plus
    vertex pairs inside one cluster that are not positive edges. The
    negative term is computed per cluster as C(size, 2) minus the positive
    pairs inside, so memory stays proportional to the positive edges.
    """
    if clustering.n != g.n:
        raise ValueError(
            f"clustering covers {clustering.n} vertices, graph has {g.n}"
        )
    labels = clustering.assignment
    sizes: dict[int, int] = {}
    for c in labels:
        sizes[c] = sizes.get(c, 0) + 1
    intra_pos = 0
    cut_pos = 0
    for u, v in g.edges():
        if labels[u] == labels[v]:
            intra_pos += 1
        else:
            cut_pos += 1
    intra_pairs = sum(s * (s - 1) // 2 for s in sizes.values())
    return cut_pos + (intra_pairs - intra_pos)


@dataclass(frozen=True)
class DegreeProfile:
    """Per-vertex positive degrees and their maximum."""

    degrees: tuple[int, ...]
    max_degree: int


def degree_profile(g: SignedGraph) -> DegreeProfile:
    degrees = tuple(g.degree(v) for v in range(g.n))
    return DegreeProfile(degrees, max(degrees, default=0))


@dataclass(frozen=True)
class ArboricityEstimate:
    """Interval certified to contain the arboricity of the positive graph.

    ``degeneracy`` is computed exactly by min-degree peeling; the true
    arboricity lies in ``[ceil(d/2), d]``. A user-declared value outside the
    interval is kept but flagged through ``warning``.
    """

    lambda_input: int | None
    degeneracy: int
    lambda_bounds: tuple[int, int]
    warning: str | None = None

    def best(self) -> int:
        """Value algorithms should use: the declared one, else the upper bound."""
        if self.lambda_input is not None:
            return self.lambda_input
        return self.lambda_bounds[1]


def _degeneracy(g: SignedGraph) -> int:
    """Max over the min-degree peeling order of the degree at removal time."""
    n = g.n
    if n == 0:
        return 0
    deg = [g.degree(v) for v in range(n)]
    max_deg = max(deg)
    buckets: list[list[int]] = [[] for _ in range(max_deg + 1)]
    for v in range(n):
        buckets[deg[v]].append(v)
    removed = [False] * n
    best = 0
    cur = 0
    for _ in range(n):
        while cur <= max_deg and not buckets[cur]:
            cur += 1
        while True:
            v = buckets[cur].pop()
            if not removed[v] and deg[v] == cur:
                break
        removed[v] = True
        best = max(best, cur)
        for u in g.neighbors(v):
            if not removed[u]:
                deg[u] -= 1
                buckets[deg[u]].append(u)
                if deg[u] < cur:
                    cur = deg[u]
    return best


def estimate_arboricity(
    g: SignedGraph, lambda_input: int | None = None
) -> ArboricityEstimate:
    """Bracket the arboricity via degeneracy peeling.

    Exact arboricity is not computed; degeneracy ``d`` certifies the
    interval ``[ceil(d/2), d]``.
    """
    d = _degeneracy(g)
    bounds = (math.ceil(d / 2), d)
    warning = None
    if lambda_input is not None and not (bounds[0] <= lambda_input <= bounds[1]):
        warning = (
            f"declared arboricity {lambda_input} outside certified interval "
            f"[{bounds[0]}, {bounds[1]}]"
        )
    return ArboricityEstimate(lambda_input, d, bounds, warning)


def bad_triangle_packing(g: SignedGraph) -> list[tuple[int, int, int]]:
    """Greedy pair-disjoint packing of bad triangles.

    A bad triangle is a triple with exactly two positive edges; any
    clustering pays at least one disagreement on each, so the packing size
    lower-bounds every clustering cost. The greedy scan is deterministic:
    apex vertices ascending, neighbor pairs in sorted order. All three
    vertex pairs of a chosen triangle are retired.
    """
    used: set[tuple[int, int]] = set()

    def pair(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    packing = []
    for v in range(g.n):
        nbrs = g.neighbors(v)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                u, w = nbrs[i], nbrs[j]
                if g.has_edge(u, w):
                    continue
                p1, p2, p3 = pair(v, u), pair(v, w), pair(u, w)
                if p1 in used or p2 in used or p3 in used:
                    continue
                used.update((p1, p2, p3))
                packing.append(tuple(sorted((v, u, w))))
    return packing
