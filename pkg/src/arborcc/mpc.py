"""Deterministic simulator of a sublinear-memory massively parallel runtime.

The runtime hosts ``M`` machines that proceed in synchronous rounds. Each
round, every stepped machine reads its inbox, mutates only its own store,
and emits messages; the simulator routes messages for delivery at the start
of the next round. Two budgets are enforced after every round and any
violation aborts the run (never silently truncates):

* memory: no machine's store may exceed ``S`` words;
* traffic: no machine may send or receive more than ``traffic_factor * S``
  words in one round.

A word is the unit of accounting: one per vertex id, rank, status, scalar
value, or message header. Two machine layouts are supported. In the
``sublinear`` variant, vertices are spread over ``M >= ceil(N/S)`` machines
by a seeded multiply-shift hash and a machine stores the adjacency of every
vertex it owns. In the ``sublinear_extra`` variant there are at least ``n``
machines and vertex ``v`` lives on machine ``v``.

Determinism: given the same config, graph, seed, and program, message
delivery order (sorted by sender then emission index), the ledger, and all
outputs are identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping

from .graph import SignedGraph

__all__ = [
    "MpcError",
    "BudgetViolation",
    "PreconditionError",
    "MpcConfig",
    "Machine",
    "MpcRuntime",
    "NeighborhoodBall",
    "word_size",
    "init_runtime",
    "distribute_ordering",
    "broadcast_aggregate",
    "graph_exponentiate",
]

_MERSENNE = (1 << 61) - 1


class MpcError(RuntimeError):
    pass


class BudgetViolation(MpcError):
    """A machine exceeded its memory or per-round traffic budget."""

    def __init__(
        self,
        kind: str,
        machine: int,
        round_no: int,
        words: int,
        limit: int,
        vertex: int | None = None,
    ):
        self.kind = kind
        self.machine = machine
        self.round_no = round_no
        self.words = words
        self.limit = limit
        self.vertex = vertex
        loc = f"machine {machine}" if vertex is None else f"vertex {vertex} on machine {machine}"
        super().__init__(
            f"{kind} budget exceeded at round {round_no}: {loc} holds "
            f"{words} words, limit {limit}"
        )


class PreconditionError(ValueError):
    pass


def word_size(obj: Any) -> int:
    """Number of accounting words an object occupies."""
    if obj is None:
        return 0
    if isinstance(obj, (int, float, str)):
        return 1
    if isinstance(obj, (tuple, list, set, frozenset)):
        return sum(word_size(x) for x in obj)
    if isinstance(obj, dict):
        return sum(word_size(k) + word_size(v) for k, v in obj.items())
    raise TypeError(f"cannot account words for {type(obj).__name__}")


@dataclass
class MpcConfig:
    """Parameters of the simulated runtime.

    ``S = ceil(n**delta * polylog_factor)`` words per machine; the default
    polylog factor is ``4 * ceil(log2 n)`` so the budget is concrete and
    tunable. ``machine_count=None`` picks a count that satisfies the model
    invariant (at least ``ceil(N/S)`` machines, or at least ``n`` in the
    ``sublinear_extra`` variant).
    """

    n: int
    delta: float = 0.5
    polylog_factor: float | None = None
    model: str = "sublinear"
    machine_count: int | None = None
    traffic_factor: float = 4.0
    degree_factor: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not (0.0 < self.delta < 1.0):
            raise ValueError("delta must lie strictly between 0 and 1")
        if self.model not in ("sublinear", "sublinear_extra"):
            raise ValueError(f"unknown model variant {self.model!r}")
        if self.polylog_factor is None:
            self.polylog_factor = 4.0 * math.ceil(math.log2(max(self.n, 2)))

    @property
    def S(self) -> int:
        s = math.ceil(self.n**self.delta * self.polylog_factor)
        return max(s, 1)

    @property
    def traffic_budget(self) -> int:
        return math.ceil(self.traffic_factor * self.S)

    def resolve_machine_count(self, g: SignedGraph) -> int:
        n_input = max(g.n, g.m, 1)
        minimum = math.ceil(n_input / self.S)
        if self.model == "sublinear_extra":
            minimum = max(minimum, g.n, 1)
        if self.machine_count is not None:
            if self.machine_count < minimum:
                raise ValueError(
                    f"model {self.model} needs at least {minimum} machines,"
                    f" got {self.machine_count}"
                )
            return self.machine_count
        if self.model == "sublinear_extra":
            return minimum
        # headroom so hashed adjacency plus per-run state fits under S
        comfortable = math.ceil(4 * (g.n + 2 * g.m) / self.S)
        return max(minimum, comfortable, 1)


class Machine:
    """One simulated machine: a word-counted store plus scratch metadata.

    ``store`` holds ledgered algorithm data; every structural change must be
    paired with the matching word delta (``put`` does this for whole keys,
    ``add_words`` covers in-place edits of nested structures). ``meta`` is
    simulator bookkeeping that is invisible to the ledger and must never
    carry information a machine could not know locally.
    """

    __slots__ = ("mid", "store", "words", "meta")

    def __init__(self, mid: int):
        self.mid = mid
        self.store: dict[str, Any] = {}
        self.words = 0
        self.meta: dict[str, Any] = {}

    def put(self, key: str, value: Any) -> None:
        old = self.store.get(key)
        self.words += word_size(value) - word_size(old)
        self.store[key] = value

    def pop(self, key: str) -> Any:
        value = self.store.pop(key, None)
        self.words -= word_size(value)
        return value

    def add_words(self, delta: int) -> None:
        self.words += delta


# step(machine, inbox) -> iterable of (dest, payload) or (dest, payload, words)
StepFn = Callable[[Machine, list[tuple[int, Any]]], Iterable[tuple] | None]


class MpcRuntime:
    """Synchronous rounds over word-budgeted machines with a message ledger."""

    def __init__(self, cfg: MpcConfig, g: SignedGraph, machine_count: int):
        self.cfg = cfg
        self.graph = g
        self.machine_count = machine_count
        self.machines = [Machine(i) for i in range(machine_count)]
        self.round = 0
        self.peak_memory = 0
        self.peak_traffic = 0
        self.seed = cfg.seed
        self._pending: dict[int, list[tuple[int, int, Any]]] = {}
        self.trace: list[dict] | None = None
        self._trace_file = None
        s = (cfg.seed & _MERSENNE) or 1
        self._hash_a = ((s * 6364136223846793005 + 1442695040888963407) % _MERSENNE) or 1
        self._hash_b = (self._hash_a * 2862933555777941757 + 3037000493) % _MERSENNE

    def owner(self, v: int) -> int:
        """Machine hosting vertex v's adjacency block."""
        if self.cfg.model == "sublinear_extra":
            return v
        return ((self._hash_a * v + self._hash_b) % _MERSENNE) % self.machine_count

    def machine_of(self, v: int) -> Machine:
        return self.machines[self.owner(v)]

    def enable_trace(self, sink) -> None:
        """Record one line per round; sink is a list or a writable file."""
        if hasattr(sink, "write"):
            self._trace_file = sink
        else:
            self.trace = sink

    def has_pending(self) -> bool:
        return bool(self._pending)

    def run_round(self, step: StepFn, active: Iterable[int] | None = None) -> None:
        """Execute one synchronous round.

        ``active`` limits which machines step (machines with pending inbox
        are always added); machines outside the set are untouched no-ops.
        Message payloads are owned by the recipient once delivered and must
        not be mutated by senders afterwards.
        """
        inboxes = self._pending
        self._pending = {}
        if active is None:
            ids: Iterable[int] = range(self.machine_count)
        else:
            ids = sorted(set(active) | set(inboxes))
        limit = self.cfg.traffic_budget
        mem_limit = self.cfg.S
        recv_words: dict[int, int] = {}
        round_peak_mem = 0
        round_peak_traffic = 0
        stepped = 0
        for mid in ids:
            m = self.machines[mid]
            raw = inboxes.get(mid)
            if raw:
                raw.sort(key=lambda t: (t[0], t[1]))
                inbox = [(s, payload) for s, _, payload in raw]
            else:
                inbox = []
            out = step(m, inbox)
            stepped += 1
            sent = 0
            seq = 0
            if out:
                for item in out:
                    if len(item) == 3:
                        dest, payload, words = item
                        if words is None:
                            words = word_size(payload) + 1
                    else:
                        dest, payload = item
                        words = word_size(payload) + 1
                    sent += words
                    recv_words[dest] = recv_words.get(dest, 0) + words
                    self._pending.setdefault(dest, []).append((mid, seq, payload))
                    seq += 1
            if sent > limit:
                raise BudgetViolation("traffic", mid, self.round, sent, limit)
            if m.words > mem_limit:
                raise BudgetViolation("memory", mid, self.round, m.words, mem_limit)
            if m.words > round_peak_mem:
                round_peak_mem = m.words
            if sent > round_peak_traffic:
                round_peak_traffic = sent
        for dest, words in recv_words.items():
            if words > limit:
                raise BudgetViolation("traffic", dest, self.round, words, limit)
            if words > round_peak_traffic:
                round_peak_traffic = words
        self.peak_memory = max(self.peak_memory, round_peak_mem)
        self.peak_traffic = max(self.peak_traffic, round_peak_traffic)
        self.round += 1
        if self.trace is not None or self._trace_file is not None:
            record = {
                "round": self.round,
                "max_mem": round_peak_mem,
                "max_traffic": round_peak_traffic,
                "active_machines": stepped,
            }
            if self.trace is not None:
                self.trace.append(record)
            if self._trace_file is not None:
                self._trace_file.write(json.dumps(record, sort_keys=True) + "\n")

    def refresh_peak_memory(self) -> None:
        self.peak_memory = max(
            self.peak_memory, max((m.words for m in self.machines), default=0)
        )

    def report(self) -> dict:
        """Read-only snapshot of the round and budget counters."""
        return {
            "rounds": self.round,
            "peak_memory": self.peak_memory,
            "peak_traffic": self.peak_traffic,
        }


def init_runtime(cfg: MpcConfig, g: SignedGraph) -> MpcRuntime:
    """Distribute a graph over machines and initialize the ledger.

    Adjacency blocks are grouped by vertex: machine ``owner(v)`` stores the
    neighbor list of ``v``. The standing assumption that the maximum
    positive degree fits inside one machine's budget is checked up front.
    """
    if cfg.n != g.n:
        raise ValueError(f"config is for n={cfg.n}, graph has n={g.n}")
    max_deg = max((g.degree(v) for v in range(g.n)), default=0)
    allowed = cfg.degree_factor * cfg.S
    if max_deg > allowed:
        raise PreconditionError(
            f"maximum positive degree {max_deg} exceeds degree_factor * S = "
            f"{allowed:g}; the runtime assumes every neighborhood fits in one"
            " machine's budget"
        )
    machine_count = cfg.resolve_machine_count(g)
    rt = MpcRuntime(cfg, g, machine_count)
    for v in range(g.n):
        m = rt.machine_of(v)
        adj = m.store.get("adj")
        if adj is None:
            adj = {}
            m.store["adj"] = adj
        nbrs = g.neighbors(v)
        adj[v] = nbrs
        m.add_words(1 + len(nbrs))
    rt.refresh_peak_memory()
    mem_limit = cfg.S
    for m in rt.machines:
        if m.words > mem_limit:
            raise BudgetViolation("memory", m.mid, 0, m.words, mem_limit)
    return rt


def distribute_ordering(rt: MpcRuntime, ordering) -> None:
    """Store each vertex's rank at its owner and exchange ranks along edges.

    Owners learn the ranks of all neighbors of their vertices ("nrank").
    Costs one round.
    """
    rank = ordering.rank
    g = rt.graph
    for v in range(g.n):
        m = rt.machine_of(v)
        store_rank = m.store.get("rank")
        if store_rank is None:
            store_rank = {}
            m.store["rank"] = store_rank
        store_rank[v] = rank[v]
        m.add_words(2)

    def step(machine: Machine, inbox):
        out = []
        ranks = machine.store.get("rank", {})
        for v, r in ranks.items():
            dests = sorted({rt.owner(u) for u in rt.graph.neighbors(v)})
            for d in dests:
                out.append((d, (v, r), 3))
        return out

    rt.run_round(step)

    def absorb(machine: Machine, inbox):
        if not inbox:
            return None
        nrank = machine.store.get("nrank")
        if nrank is None:
            nrank = {}
            machine.store["nrank"] = nrank
        for _, (v, r) in inbox:
            if v not in nrank:
                nrank[v] = r
                machine.add_words(2)
        return None

    rt.run_round(absorb, active=())


_AGGREGATORS = {
    "sum": sum,
    "min": min,
    "max": max,
}


def broadcast_aggregate(
    rt: MpcRuntime, fn: str, values: Mapping[int, Any]
) -> dict[int, Any]:
    """Distributive aggregate of neighbor values, for every vertex at once.

    ``values`` maps contributing vertices to an int (or a small tuple, for
    min/max with lexicographic order). Returns per-vertex results over the
    open neighborhood; vertices with no contributing neighbor map to None
    (the empty aggregate). Costs two rounds: one to ship values to neighbor
    owners, one to fold.
    """
    if fn not in _AGGREGATORS:
        raise ValueError(f"aggregate must be one of {sorted(_AGGREGATORS)}")
    fold = _AGGREGATORS[fn]
    g = rt.graph
    owners_with_values = set()
    for v, val in values.items():
        m = rt.machine_of(v)
        bval = m.store.get("bval")
        if bval is None:
            bval = {}
            m.store["bval"] = bval
        bval[v] = val
        m.add_words(1 + word_size(val))
        owners_with_values.add(m.mid)

    def emit(machine: Machine, inbox):
        out = []
        bval = machine.store.get("bval")
        if not bval:
            return None
        for v in sorted(bval):
            val = bval[v]
            w = word_size(val) + 2
            for d in sorted({rt.owner(u) for u in rt.graph.neighbors(v)}):
                out.append((d, (v, val), w))
        return out

    rt.run_round(emit, active=sorted(owners_with_values))

    def gather(machine: Machine, inbox):
        if not inbox:
            return None
        got = {v: val for _, (v, val) in inbox}
        adj = machine.store.get("adj", {})
        bagg = machine.store.get("bagg")
        if bagg is None:
            bagg = {}
            machine.store["bagg"] = bagg
        for u in sorted(adj):
            vals = [got[x] for x in adj[u] if x in got]
            if vals:
                bagg[u] = fold(vals)
                machine.add_words(1 + word_size(bagg[u]))
        return None

    rt.run_round(gather, active=())

    results: dict[int, Any] = {v: None for v in range(g.n)}
    for m in rt.machines:
        bagg = m.store.get("bagg")
        if bagg:
            results.update(bagg)
        m.pop("bagg")
        m.pop("bval")
    return results


@dataclass(frozen=True)
class NeighborhoodBall:
    """A vertex's r-hop neighborhood with ranks and induced topology.

    ``members`` maps each vertex within ``radius`` hops of ``center`` to its
    rank (None when no ordering has been distributed). ``topology`` is the
    induced subgraph on the members, closed under edges between them.
    """

    center: int
    radius: int
    members: dict[int, int | None]
    topology: dict[int, tuple[int, ...]]


def _entry_words(entry: tuple) -> int:
    _, r, adj = entry
    return 1 + (0 if r is None else 1) + len(adj)


def _ball_words(ball: dict[int, tuple]) -> int:
    return sum(1 + _entry_words(e) for e in ball.values())


def _bfs_within(ball: dict[int, tuple], center: int, depth: int) -> list[int]:
    """Members within ``depth`` hops of center, walking stored adjacency."""
    seen = {center}
    frontier = [center]
    for _ in range(depth):
        nxt = []
        for x in frontier:
            entry = ball.get(x)
            if entry is None:
                continue
            for y in entry[2]:
                if y in ball and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    return sorted(seen)


def graph_exponentiate(
    rt: MpcRuntime, target_radius: int, vertices: Iterable[int] | None = None
) -> dict[int, NeighborhoodBall]:
    """Gather every vertex's r-hop ball by repeated radius doubling.

    One setup round ships each vertex's own record (id, rank, adjacency) to
    its neighbors' owners, establishing radius 1. Then ``ceil(log2 r)``
    doubling rounds merge balls: a vertex at current radius ``k`` receives
    the balls of all members within ``min(k, r - k)`` hops, extending its
    radius to ``min(2k, r)``. A ball that alone exceeds the machine budget
    aborts with a violation naming the vertex.
    """
    g = rt.graph
    if target_radius < 0:
        raise ValueError("radius must be nonnegative")
    subset = sorted(set(vertices)) if vertices is not None else list(range(g.n))
    active = sorted({rt.owner(v) for v in subset}) if subset else []
    mem_limit = rt.cfg.S

    def own_entry(machine: Machine, v: int) -> tuple:
        r = machine.store.get("rank", {}).get(v)
        return (v, r, machine.store["adj"][v])

    # radius-0 balls, locally
    for v in subset:
        m = rt.machine_of(v)
        balls = m.store.get("ball")
        if balls is None:
            balls = {}
            m.store["ball"] = balls
        entry = own_entry(m, v)
        balls[v] = {v: entry}
        m.add_words(2 + _entry_words(entry))

    if target_radius >= 1:
        # setup round: neighbors exchange their own records
        def seed_step(machine: Machine, inbox):
            out = []
            balls = machine.store.get("ball", {})
            for v in sorted(balls):
                entry = balls[v][v]
                w = _entry_words(entry) + 2
                for u in rt.graph.neighbors(v):
                    out.append((rt.owner(u), (u, v, entry), w))
            return out

        rt.run_round(seed_step, active=active)

        def seed_absorb(machine: Machine, inbox):
            balls = machine.store.get("ball", {})
            for _, (target, src, entry) in inbox:
                ball = balls.get(target)
                if ball is not None and src not in ball:
                    ball[src] = entry
                    machine.add_words(1 + _entry_words(entry))
            return None

        rt.run_round(seed_absorb, active=())

        radius = 1
        while radius < target_radius:
            send_depth = min(radius, target_radius - radius)
            cur = radius

            def double_step(machine: Machine, inbox, depth=send_depth):
                out = []
                balls = machine.store.get("ball", {})
                for v in sorted(balls):
                    ball = balls[v]
                    words = _ball_words(ball) + 2
                    for u in _bfs_within(ball, v, depth):
                        if u == v:
                            continue
                        out.append((rt.owner(u), (u, ball), words))
                return out

            rt.run_round(double_step, active=active)

            def double_absorb(machine: Machine, inbox):
                balls = machine.store.get("ball", {})
                for _, (target, other) in inbox:
                    ball = balls.get(target)
                    if ball is None:
                        continue
                    for x, entry in other.items():
                        if x not in ball:
                            ball[x] = entry
                            machine.add_words(1 + _entry_words(entry))
                return None

            rt.run_round(double_absorb, active=())
            radius = min(2 * radius, target_radius)

    # assemble results and check per-ball budgets
    results: dict[int, NeighborhoodBall] = {}
    for v in subset:
        m = rt.machine_of(v)
        ball = m.store["ball"][v]
        words = _ball_words(ball)
        if words > mem_limit:
            raise BudgetViolation("memory", m.mid, rt.round, words, mem_limit, vertex=v)
        members = {x: e[1] for x, e in ball.items()}
        topology = {
            x: tuple(y for y in e[2] if y in ball) for x, e in ball.items()
        }
        results[v] = NeighborhoodBall(v, target_radius, members, topology)
    # drop gathered balls so later phases start from the base layout
    for v in subset:
        m = rt.machine_of(v)
        balls = m.store.get("ball")
        if balls and v in balls:
            m.add_words(-(2 + sum(1 + _entry_words(e) for e in balls[v].values()) - 1))
            del balls[v]
    for mid in {rt.owner(v) for v in subset}:
        m = rt.machines[mid]
        if "ball" in m.store and not m.store["ball"]:
            del m.store["ball"]
    return results
