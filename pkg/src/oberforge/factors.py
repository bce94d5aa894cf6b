"""Factors of the complete graph on ``G ∪ {∞}`` and the right action of ``G``.

Vertices are plain ints (element indices) plus the singleton :data:`INF`,
which sorts after every int. Edges are canonical ``(u, v)`` tuples with
``u < v``, so equality of factors is equality of edge sets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import NotATwoFactor, ParameterError
from .groups import FiniteGroup

__all__ = [
    "INF",
    "Vertex",
    "Edge",
    "Factor",
    "CycleStructure",
    "make_edge",
    "build_factor",
    "is_k_factor",
    "act",
    "difference_list",
    "stabilizer",
    "cycle_structure",
    "cycles",
    "complete_graph_edges",
]


class _Infinity:
    """The point at infinity; fixed by every group element."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Infinity, ())

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "∞"

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True


INF = _Infinity()
Vertex = Union[int, _Infinity]
Edge = tuple


def make_edge(u: Vertex, v: Vertex) -> Edge:
    if u == v:
        raise ParameterError(f"loop at vertex {u!r}")
    return (u, v) if u < v else (v, u)


def _check_vertex(G: FiniteGroup, v) -> None:
    if v is INF:
        return
    if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < G.order:
        raise ParameterError(f"bad vertex {v!r} for {G.spec} (order {G.order})")


class Factor:
    """An immutable spanning subgraph of the complete graph on ``G ∪ {∞}``."""

    def __init__(self, group: FiniteGroup, edges: Iterable[Edge]):
        self.group = group
        canon = set()
        for u, v in edges:
            _check_vertex(group, u)
            _check_vertex(group, v)
            canon.add(make_edge(u, v))
        self.edges: frozenset[Edge] = frozenset(canon)

    def __eq__(self, other) -> bool:
        return isinstance(other, Factor) and self.group == other.group and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Factor({self.group.spec}, {len(self.edges)} edges)"

    def vertices(self) -> list[Vertex]:
        return [*range(self.group.order), INF]

    @cached_property
    def adjacency(self) -> dict[Vertex, tuple[Vertex, ...]]:
        adj: dict = {v: [] for v in self.vertices()}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def degree(self, v: Vertex) -> int:
        return len(self.adjacency[v])

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def build_factor(
    G: FiniteGroup,
    cycles: Iterable[Sequence[Vertex]] | None = None,
    edges: Iterable[Sequence[Vertex]] | None = None,
) -> Factor:
    """Build a factor from vertex cycles and/or an explicit edge list.

    Degree regularity is not enforced here; see :func:`is_k_factor`.
    """
    seen: set[Edge] = set()

    def add(u, v):
        _check_vertex(G, u)
        _check_vertex(G, v)
        e = make_edge(u, v)
        if e in seen:
            raise ParameterError(f"duplicate edge {_fmt_edge(e)}")
        seen.add(e)

    for cyc in cycles or ():
        cyc = list(cyc)
        if len(cyc) < 3:
            raise ParameterError(f"cycle {cyc} has length < 3")
        if len(set(cyc)) != len(cyc):
            raise ParameterError(f"cycle {cyc} repeats a vertex")
        for i, u in enumerate(cyc):
            add(u, cyc[(i + 1) % len(cyc)])
    for e in edges or ():
        u, v = e
        add(u, v)
    return Factor(G, seen)


def _fmt_edge(e: Edge) -> str:
    return f"[{e[0]}, {e[1]}]"


def is_k_factor(F: Factor, k: int) -> bool:
    return all(len(ns) == k for ns in F.adjacency.values())


def act(F: Factor, g: int) -> Factor:
    """Right-multiply every vertex of ``F`` by ``g`` (``∞`` is fixed)."""
    G = F.group
    G._check(g)
    col = [row[g] for row in G.table]

    def img(v):
        return v if v is INF else col[v]

    return Factor(G, (make_edge(img(u), img(v)) for u, v in F.edges))


def difference_list(F: Factor) -> Counter:
    """Multiset ``{ab^-1, ba^-1}`` over edges ``[a, b]`` avoiding ``∞``."""
    G = F.group
    t, inv = G.table, G.inverse
    diffs: Counter = Counter()
    for a, b in F.edges:
        if b is INF:
            continue
        diffs[t[a][inv[b]]] += 1
        diffs[t[b][inv[a]]] += 1
    return diffs


def stabilizer(F: Factor) -> frozenset[int]:
    """Elements ``g`` with ``Fg = F`` (always a subgroup containing the identity)."""
    G = F.group
    edges = F.edges
    out = []
    for g in range(G.order):
        col = [row[g] for row in G.table]
        ok = True
        for u, v in edges:
            e = make_edge(col[u], v if v is INF else col[v])
            if e not in edges:
                ok = False
                break
        if ok:
            out.append(g)
    return frozenset(out)


@dataclass(frozen=True)
class CycleStructure:
    """Cycle lengths of a 2-factor, or the offending degrees otherwise."""

    lengths: tuple[int, ...] | None
    bad_degrees: dict = field(default_factory=dict)

    @property
    def is_two_factor(self) -> bool:
        return self.lengths is not None


def cycle_structure(F: Factor) -> CycleStructure:
    bad = {v: len(ns) for v, ns in F.adjacency.items() if len(ns) != 2}
    if bad:
        return CycleStructure(None, bad)
    return CycleStructure(tuple(sorted(len(c) for c in _walk_cycles(F))))


def _walk_cycles(F: Factor) -> list[list[Vertex]]:
    adj = F.adjacency
    seen = set()
    out = []
    # the ∞-cycle first, then the rest by least vertex
    for start in [INF, *range(F.group.order)]:
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        prev, cur = start, adj[start][0]
        while cur != start:
            cyc.append(cur)
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        out.append(cyc)
    return out


def cycles(F: Factor) -> list[list[Vertex]]:
    """The cycles of a 2-factor in canonical orientation.

    The cycle through ``∞`` comes first and starts ``∞, a, ...`` where ``a`` is
    the smaller neighbour of ``∞``. Every other cycle starts at its least
    vertex and continues to that vertex's smaller neighbour. Cycles are
    ordered by least element.
    """
    cs = cycle_structure(F)
    if not cs.is_two_factor:
        raise NotATwoFactor("factor is not 2-regular", cs.bad_degrees)
    return _walk_cycles(F)


def complete_graph_edges(G: FiniteGroup) -> frozenset[Edge]:
    verts = [*range(G.order), INF]
    return frozenset((u, v) for i, u in enumerate(verts) for v in verts[i + 1:])
