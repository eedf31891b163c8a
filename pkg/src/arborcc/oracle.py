"""Brute-force reference implementations used as ground truth in tests.

Everything here favors transparency over speed and is intentionally
independent of the production algorithms it checks: optimum clusterings by
set-partition enumeration, maximum matchings by pruned edge-subset search,
greedy maximal independent sets by a direct rank scan, and dependency-range
probes for the greedy process.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .graph import Clustering, SignedGraph, VertexOrdering

__all__ = [
    "OptResult",
    "brute_force_opt",
    "brute_force_max_matching",
    "sequential_greedy_mis",
    "dependency_radius",
    "decision_depths",
    "exact_arboricity",
    "count_connected_sets",
]

OPT_MAX_N = 12
MATCHING_MAX_EDGES = 24
RADIUS_EXHAUSTIVE_MAX_N = 10


@dataclass(frozen=True)
class OptResult:
    """Optimum disagreement count with witnesses.

    ``witness`` is the first optimum partition in lexicographic
    restricted-growth order. ``bounded_witness`` is the first optimum
    partition whose clusters all have at most ``4*lam - 2`` vertices, or
    None when no optimum partition satisfies the cap.
    """

    opt_cost: int
    witness: Clustering
    bounded_witness: Clustering | None


def brute_force_opt(g: SignedGraph, lam: int | None = None) -> OptResult:
    """Minimum-cost clustering by enumerating all set partitions.

    Enumeration follows restricted-growth strings in lexicographic order
    with an exact incremental cost, pruning branches that already exceed
    the best complete partition. Ties keep the first-found witness.
    """
    n = g.n
    if n > OPT_MAX_N:
        raise ValueError(
            f"partition enumeration limited to n <= {OPT_MAX_N}, got {n}"
        )
    if n == 0:
        empty = Clustering([])
        return OptResult(0, empty, empty)

    adj_mask = [0] * n
    for u, v in g.edges():
        adj_mask[u] |= 1 << v
        adj_mask[v] |= 1 << u

    cap = 4 * lam - 2 if lam is not None else None

    best = math.inf
    best_rgs: list[int] | None = None
    best_bounded: list[int] | None = None

    block_mask = [0] * n
    block_size = [0] * n
    rgs = [0] * n

    def rec(k: int, blocks: int, cost_so_far: int) -> None:
        nonlocal best, best_rgs, best_bounded
        if cost_so_far > best:
            return
        if k == n:
            if cost_so_far < best:
                best = cost_so_far
                best_rgs = rgs.copy()
                best_bounded = None
            if best_bounded is None and cost_so_far == best:
                if cap is None or all(
                    block_size[b] <= cap for b in range(blocks)
                ):
                    best_bounded = rgs.copy()
            return
        mask_k = adj_mask[k]
        earlier = (mask_k & ((1 << k) - 1)).bit_count()
        for b in range(blocks + 1):
            if b < blocks:
                inside = (block_mask[b] & mask_k).bit_count()
                delta = block_size[b] - inside  # new negative intra pairs
            else:
                inside = 0
                delta = 0
            # positive edges from k to earlier vertices in other blocks are
            # settled once k is placed
            new_cost = cost_so_far + delta + (earlier - inside)
            if new_cost > best:
                continue
            rgs[k] = b
            block_mask[b] |= 1 << k
            block_size[b] += 1
            rec(k + 1, blocks + (1 if b == blocks else 0), new_cost)
            block_mask[b] &= ~(1 << k)
            block_size[b] -= 1
        return

    rec(0, 0, 0)
    assert best_rgs is not None
    witness = Clustering(best_rgs)
    bounded = Clustering(best_bounded) if best_bounded is not None else None
    return OptResult(int(best), witness, bounded)


def brute_force_max_matching(g: SignedGraph) -> frozenset[tuple[int, int]]:
    """Maximum-cardinality set of disjoint positive edges.

    Exhaustive include/exclude search over the edge list with a simple
    remaining-edges bound. Only intended at oracle scale.
    """
    edges = sorted(g.edges())
    if len(edges) > MATCHING_MAX_EDGES:
        raise ValueError(
            f"edge-subset search limited to {MATCHING_MAX_EDGES} edges,"
            f" got {len(edges)}"
        )
    best: list[tuple[int, int]] = []
    chosen: list[tuple[int, int]] = []
    used = 0

    def rec(i: int) -> None:
        nonlocal best, used
        if len(chosen) + (len(edges) - i) <= len(best):
            return
        if i == len(edges):
            if len(chosen) > len(best):
                best = chosen.copy()
            return
        u, v = edges[i]
        bit = (1 << u) | (1 << v)
        if not used & bit:
            chosen.append((u, v))
            used |= bit
            rec(i + 1)
            used &= ~bit
            chosen.pop()
        rec(i + 1)

    rec(0)
    return frozenset(best)


def sequential_greedy_mis(g: SignedGraph, ordering: VertexOrdering) -> frozenset[int]:
    """Greedy maximal independent set under a vertex ordering.

    Scans vertices by ascending rank and admits a vertex exactly when no
    already-admitted neighbor precedes it.
    """
    if len(ordering) != g.n:
        raise ValueError("ordering length does not match the vertex count")
    in_mis = [False] * g.n
    rank = ordering.rank
    for v in ordering.pi:
        r = rank[v]
        if any(in_mis[u] for u in g.neighbors(v) if rank[u] < r):
            continue
        in_mis[v] = True
    return frozenset(v for v in range(g.n) if in_mis[v])


def decision_depths(g: SignedGraph, ordering: VertexOrdering) -> list[int]:
    """Iteration at which each vertex settles in the relaxation view of
    greedy MIS.

    One iteration decides every undecided vertex that either sees a
    lower-ranked neighbor already admitted (it is then covered) or has all
    lower-ranked neighbors decided and none admitted (it then joins). The
    maximum entry is the longest dependency chain the ordering realizes.
    """
    n = g.n
    rank = ordering.rank
    UNDONE, JOIN, COVER = 0, 1, 2
    state = [UNDONE] * n
    depth = [0] * n
    pred = [[u for u in g.neighbors(v) if rank[u] < rank[v]] for v in range(n)]
    pending = [len(p) for p in pred]
    succ = [[] for _ in range(n)]
    for v in range(n):
        for u in pred[v]:
            succ[u].append(v)

    frontier = [v for v in range(n) if pending[v] == 0]
    for v in frontier:
        state[v] = JOIN
        depth[v] = 1
    while frontier:
        nxt = []
        for v in frontier:
            for w in succ[v]:
                if state[w] != UNDONE:
                    continue
                if state[v] == JOIN:
                    state[w] = COVER
                    depth[w] = depth[v] + 1
                    nxt.append(w)
                else:
                    pending[w] -= 1
                    if pending[w] == 0:
                        if any(state[u] == JOIN for u in pred[w]):
                            state[w] = COVER
                        else:
                            state[w] = JOIN
                        depth[w] = depth[v] + 1
                        nxt.append(w)
        frontier = nxt
    assert all(s != UNDONE for s in state)
    return depth


def _ball(g: SignedGraph, center: int, radius: int) -> set[int]:
    seen = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for u in g.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
        if not frontier:
            break
    return seen


def dependency_radius(
    g: SignedGraph,
    ordering: VertexOrdering,
    v: int,
    method: str = "auto",
) -> int:
    """Smallest hop radius whose ordering pins down ``v``'s greedy-MIS status.

    Exhaustive mode fixes the ranks of the radius-r ball pointwise and tries
    every arrangement of the remaining vertices over the leftover rank
    slots; the radius is the first r where all completions agree with the
    realized status. Beyond ``RADIUS_EXHAUSTIVE_MAX_N`` vertices the
    exhaustive check is intractable and the function reports the realized
    dependency-chain depth of ``v`` instead (a proxy, labeled by
    ``method='proxy'``).
    """
    n = g.n
    if method == "auto":
        method = "exhaustive" if n <= RADIUS_EXHAUSTIVE_MAX_N else "proxy"
    if method == "proxy":
        return max(0, decision_depths(g, ordering)[v] - 1)
    if method != "exhaustive":
        raise ValueError(f"unknown method {method!r}")

    base_status = v in sequential_greedy_mis(g, ordering)
    for r in itertools.count():
        ball = _ball(g, v, r)
        outside = sorted(set(range(n)) - ball)
        if not outside:
            return r
        slots = sorted(ordering.rank[u] for u in outside)
        fixed = list(ordering.pi)
        agree = True
        for arrangement in itertools.permutations(outside):
            for slot, u in zip(slots, arrangement):
                fixed[slot] = u
            status = v in sequential_greedy_mis(g, VertexOrdering(fixed))
            if status != base_status:
                agree = False
                break
        if agree:
            return r
    raise AssertionError("unreachable")


def exact_arboricity(g: SignedGraph, max_n: int = 7) -> int:
    """Arboricity by maximizing ceil(|E(S)| / (|S| - 1)) over vertex subsets."""
    n = g.n
    if n > max_n:
        raise ValueError(f"subset enumeration limited to n <= {max_n}, got {n}")
    if g.m == 0:
        return 0
    adj_mask = [0] * n
    for u, w in g.edges():
        adj_mask[u] |= 1 << w
        adj_mask[w] |= 1 << u
    best = 1
    for mask in range(1, 1 << n):
        size = mask.bit_count()
        if size < 2:
            continue
        e = 0
        rest = mask
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            e += (adj_mask[v] & mask).bit_count()
        e //= 2
        best = max(best, -(-e // (size - 1)))
    return best


def count_connected_sets(g: SignedGraph, size: int) -> int:
    """Number of connected vertex subsets of the given size.

    Plain DFS enumeration; used to sanity-check tree-based upper bounds of
    the form n * 4^(k-2) * Delta^k on small graphs.
    """
    n = g.n
    found: set[frozenset[int]] = set()

    def grow(current: set[int], frontier: set[int]) -> None:
        if len(current) == size:
            found.add(frozenset(current))
            return
        for u in sorted(frontier):
            nxt_frontier = (frontier | set(g.neighbors(u))) - current - {u}
            grow(current | {u}, nxt_frontier)

    for s in range(n):
        grow({s}, set(g.neighbors(s)))
    return len(found)
