"""Backtracking search for k-starters under small groups.

The search builds a k-regular graph on ``G ∪ {∞}`` that is invariant under a
fixed candidate stabilizer ``S`` of order ``k``: every placed edge is placed
together with its ``S``-orbit. Branching always extends the least vertex
(element indices first, ``∞`` last) whose degree is still below ``k``, trying
neighbours in index order. Branches are cut on degree overflow and on any
non-identity difference occurring more than ``k`` times (in a starter every
non-identity element occurs exactly ``k`` times). Candidate stabilizers are
the order-``k`` subgroups containing the required ones, tried in sorted order.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .errors import OberforgeError, ParameterError
from .factors import INF, Factor, cycle_structure
from .groups import FiniteGroup, GroupSpec, make_group
from .starter import OPSignature, Starter, verify_starter

__all__ = [
    "DEFAULT_NODE_BUDGET",
    "DEFAULT_TIME_BUDGET",
    "SearchSpec",
    "Found",
    "Exhausted",
    "BudgetExceeded",
    "SearchBudgetExceeded",
    "find_starter",
    "enumerate_starters",
]

DEFAULT_NODE_BUDGET = 10_000_000
DEFAULT_TIME_BUDGET = 60.0


@dataclass(frozen=True)
class SearchSpec:
    group: GroupSpec
    k: int
    target_signature: OPSignature | None = None
    required_stabilizer: frozenset[int] | None = None
    node_budget: int | None = DEFAULT_NODE_BUDGET
    time_budget: float | None = DEFAULT_TIME_BUDGET

    def __post_init__(self) -> None:
        order = self.group.size
        if not isinstance(self.k, int) or self.k < 2:
            raise ParameterError(f"k must be an integer >= 2, got {self.k!r}")
        if order % self.k:
            raise ParameterError(f"k={self.k} must divide the group order {order}")
        if self.target_signature is not None:
            sig = OPSignature.parse(self.target_signature)
            object.__setattr__(self, "target_signature", sig)
            if self.k != 2:
                raise ParameterError("a target signature only makes sense for k = 2")
            if sig.order != order + 1:
                raise ParameterError(f"signature {sig} covers {sig.order} vertices, need {order + 1}")
        if self.required_stabilizer is not None:
            req = frozenset(self.required_stabilizer)
            if any(not 0 <= x < order for x in req):
                raise ParameterError(f"stabilizer elements out of range: {sorted(req)}")
            object.__setattr__(self, "required_stabilizer", req)

    def to_json(self) -> dict:
        out = {"group": self.group.to_json(), "k": self.k}
        if self.target_signature is not None:
            out["target_signature"] = self.target_signature.to_json()
        if self.required_stabilizer is not None:
            out["required_stabilizer"] = sorted(self.required_stabilizer)
        out["node_budget"] = self.node_budget
        out["time_budget"] = self.time_budget
        return out

    @classmethod
    def from_json(cls, data: dict) -> SearchSpec:
        known = {"group", "k", "target_signature", "required_stabilizer", "node_budget", "time_budget"}
        extra = set(data) - known
        if extra:
            raise ParameterError(f"unknown search spec keys: {sorted(extra)}")
        if "group" not in data or "k" not in data:
            raise ParameterError("search spec needs 'group' and 'k'")
        sig = data.get("target_signature")
        stab = data.get("required_stabilizer")
        return cls(
            group=GroupSpec.from_json(data["group"]),
            k=data["k"],
            target_signature=OPSignature.parse(sig) if sig is not None else None,
            required_stabilizer=frozenset(stab) if stab is not None else None,
            node_budget=data.get("node_budget", DEFAULT_NODE_BUDGET),
            time_budget=data.get("time_budget", DEFAULT_TIME_BUDGET),
        )


@dataclass
class Found:
    starter: Starter
    nodes: int
    elapsed: float
    status = "found"


@dataclass
class Exhausted:
    nodes: int
    elapsed: float
    status = "exhausted"


@dataclass
class BudgetExceeded:
    nodes: int
    elapsed: float
    status = "budget_exceeded"


class _OutOfBudget(Exception):
    pass


class SearchBudgetExceeded(OberforgeError):
    def __init__(self, partial: list, nodes: int, elapsed: float):
        super().__init__(f"search budget exceeded after {nodes} nodes ({elapsed:.1f}s); {len(partial)} found")
        self.partial = partial
        self.nodes = nodes
        self.elapsed = elapsed


class _Search:
    def __init__(self, G: FiniteGroup, spec: SearchSpec, S: frozenset[int], clock):
        self.G = G
        self.k = spec.k
        self.n = G.order
        self.inf = self.n
        self.S = sorted(S)
        self.spec = spec
        self.clock = clock
        self.target = Counter(spec.target_signature.lengths) if spec.target_signature else None
        self.max_len = max(self.target) if self.target else None
        size = self.n + 1
        self.adj = [set() for _ in range(size)]
        self.deg = [0] * size
        self.diff = [0] * self.n
        self._orbits: dict = {}

    def orbit(self, u: int, v: int):
        key = (u, v)
        hit = self._orbits.get(key)
        if hit is not None:
            return hit
        t, inv, inf = self.G.table, self.G.inverse, self.inf
        edges = set()
        for s in self.S:
            a = u if u == inf else t[u][s]
            b = v if v == inf else t[v][s]
            edges.add((a, b) if a < b else (b, a))
        deg: Counter = Counter()
        diff: Counter = Counter()
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
            if b != inf:
                diff[t[a][inv[b]]] += 1
                diff[t[b][inv[a]]] += 1
        hit = (tuple(sorted(edges)), tuple(deg.items()), tuple(diff.items()))
        self._orbits[key] = self._orbits[(v, u)] = hit
        return hit

    def _component(self, u: int) -> tuple[int, bool]:
        """Vertex count of u's component in a max-degree-2 graph, and whether it is a cycle."""
        adj = self.adj
        count = 1
        for first in list(adj[u]):
            prev, cur = u, first
            while True:
                if cur == u:
                    return count, True
                count += 1
                nxt = [w for w in adj[cur] if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
        return count, False

    def _place(self, orbit) -> list | None:
        """Add an orbit of edges; return the undo record or None if infeasible."""
        edges, deg_inc, diff_inc = orbit
        k = self.k
        for v, c in deg_inc:
            if self.deg[v] + c > k:
                return None
        for d, c in diff_inc:
            if self.diff[d] + c > k:
                return None
        for v, c in deg_inc:
            self.deg[v] += c
        for d, c in diff_inc:
            self.diff[d] += c
        closed = []
        ok = True
        for a, b in edges:
            self.adj[a].add(b)
            self.adj[b].add(a)
            if self.target is not None and ok:
                size, is_cycle = self._component(a)
                if is_cycle:
                    if self.target[size] <= 0:
                        ok = False
                    else:
                        self.target[size] -= 1
                        closed.append(size)
                elif size > self.max_len:
                    ok = False
        undo = (orbit, closed)
        if not ok:
            self._unplace(undo)
            return None
        return undo

    def _unplace(self, undo) -> None:
        (edges, deg_inc, diff_inc), closed = undo
        for a, b in edges:
            self.adj[a].discard(b)
            self.adj[b].discard(a)
        for v, c in deg_inc:
            self.deg[v] -= c
        for d, c in diff_inc:
            self.diff[d] -= c
        for size in closed:
            self.target[size] += 1

    def run(self) -> Iterator[Starter]:
        yield from self._dfs(-1, -1)

    def _dfs(self, last_u: int, last_v: int) -> Iterator[Starter]:
        self.clock.tick()
        k, deg = self.k, self.deg
        u = next((v for v in range(self.n + 1) if deg[v] < k), None)
        if u is None:
            starter = self._finish()
            if starter is not None:
                yield starter
            return
        floor = last_v if u == last_u else -1
        adj_u = self.adj[u]
        for v in range(floor + 1, self.n + 1):
            if v == u or v in adj_u or deg[v] >= k:
                continue
            undo = self._place(self.orbit(u, v))
            if undo is None:
                continue
            yield from self._dfs(u, v)
            self._unplace(undo)

    def _finish(self) -> Starter | None:
        inf = self.inf
        edges = [
            (a, INF if b == inf else b) for a in range(self.n) for b in self.adj[a] if b > a
        ]
        F = Factor(self.G, edges)
        if self.spec.target_signature is not None:
            cs = cycle_structure(F)
            if cs.lengths != self.spec.target_signature.lengths:
                return None
        report = verify_starter(self.G, F, self.k)
        if not report.accepted:
            return None
        if self.spec.required_stabilizer and not self.spec.required_stabilizer <= report.stabilizer:
            return None
        return report.starter


class _Clock:
    def __init__(self, node_budget: int | None, time_budget: float | None):
        self.node_budget = node_budget
        self.time_budget = time_budget
        self.nodes = 0
        self.start = time.monotonic()

    def tick(self) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _OutOfBudget
        if self.time_budget is not None and self.nodes % 1024 == 0:
            if time.monotonic() - self.start > self.time_budget:
                raise _OutOfBudget

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.start


def _candidate_stabilizers(G: FiniteGroup, spec: SearchSpec) -> list[frozenset[int]]:
    req = G.closure(spec.required_stabilizer or ())
    if spec.k % len(req):
        raise ParameterError(f"required stabilizer generates a subgroup of order {len(req)}, not dividing k={spec.k}")
    return [H for H in G.subgroups_of_order(spec.k) if req <= H]


def _search(spec: SearchSpec, clock: _Clock) -> Iterator[Starter]:
    G = make_group(spec.group)
    for S in _candidate_stabilizers(G, spec):
        yield from _Search(G, spec, S, clock).run()


def find_starter(spec: SearchSpec) -> Found | Exhausted | BudgetExceeded:
    """Return the first starter in the frozen branching order, if any."""
    clock = _Clock(spec.node_budget, spec.time_budget)
    try:
        for starter in _search(spec, clock):
            return Found(starter, clock.nodes, clock.elapsed)
    except _OutOfBudget:
        return BudgetExceeded(clock.nodes, clock.elapsed)
    return Exhausted(clock.nodes, clock.elapsed)


def enumerate_starters(spec: SearchSpec, limit: int) -> list[Starter]:
    """Up to ``limit`` distinct starters (by edge set) in search order.

    Running out of budget raises :class:`SearchBudgetExceeded`, which carries
    the starters found so far.
    """
    if limit < 0:
        raise ParameterError(f"limit must be >= 0, got {limit}")
    out: list[Starter] = []
    if limit == 0:
        return out
    seen = set()
    clock = _Clock(spec.node_budget, spec.time_budget)
    try:
        for starter in _search(spec, clock):
            if starter.factor.edges in seen:
                continue
            seen.add(starter.factor.edges)
            out.append(starter)
            if len(out) >= limit:
                break
    except _OutOfBudget:
        raise SearchBudgetExceeded(out, clock.nodes, clock.elapsed) from None
    return out
