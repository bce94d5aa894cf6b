"""Constructions on 2-starters: dihedral doubling, the ``G x Z_n`` lift, and
the split of a lifted ``2p``-starter into ``p`` isomorphic 2-factors.

Vertices of a lifted graph are written as pairs ``(g, k)`` with ``g`` in the
base group and ``k`` in ``Z_n``; :func:`pair_index` maps them to element
indices of the product group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvariantViolation, ParameterError, PreconditionError
from .factors import INF, Factor, act, build_factor, cycles
from .groups import FiniteGroup, GroupSpec, make_group
from .starter import (
    Factorization,
    OPSignature,
    Starter,
    op_signature,
    orbit_translates,
    verify_factorization,
    verify_starter,
)

__all__ = [
    "TwoStarterProfile",
    "LiftedStarter",
    "OPSolution",
    "is_prime",
    "pair_index",
    "two_starter_profile",
    "lift_2n",
    "dihedral_double",
    "walecki_cycles",
    "rotated_factor",
    "expand_cycle",
    "split_lift",
    "solve_op",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class TwoStarterProfile:
    """A 2-starter written as ``(∞, a, y_1..y_m, b)`` plus the other cycles ``x^i``."""

    group: FiniteGroup
    infinity_cycle: tuple
    other_cycles: tuple[tuple[int, ...], ...]

    @property
    def a(self) -> int:
        return self.infinity_cycle[1]

    @property
    def b(self) -> int:
        return self.infinity_cycle[-1]

    @property
    def y(self) -> tuple[int, ...]:
        return tuple(self.infinity_cycle[2:-1])

    @property
    def path_len_m(self) -> int:
        return len(self.infinity_cycle) - 3

    @property
    def a_inf(self) -> int:
        return len(self.infinity_cycle)

    @property
    def lengths(self) -> tuple[int, ...]:
        """``(a_∞, a_1, ..., a_N)``."""
        return (self.a_inf, *(len(c) for c in self.other_cycles))

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "y": list(self.y), "cycles": [list(c) for c in self.other_cycles]}


def two_starter_profile(S: Starter) -> TwoStarterProfile:
    """Label a 2-starter's cycles; ``a`` is the smaller neighbour of ``∞``."""
    if S.k != 2:
        raise PreconditionError(f"a 2-starter is required, got k={S.k}")
    cs = cycles(S.factor)
    inf_cycle = cs[0]
    if inf_cycle[0] is not INF:
        raise PreconditionError("factor has no cycle through ∞")
    m = len(inf_cycle) - 3
    if m % 2:
        raise PreconditionError(f"the cycle through ∞ has even length {len(inf_cycle)}; odd path length m={m}")
    return TwoStarterProfile(S.group, tuple(inf_cycle), tuple(tuple(c) for c in cs[1:]))


def pair_index(n: int, g: int, k: int) -> int:
    """Index of ``(g, k)`` in ``G x Z_n`` under the product convention."""
    return g * n + (k % n)


def _to_index(n: int, v):
    return v if v is INF else pair_index(n, v[0], v[1])


def _lift_group(G: FiniteGroup, n: int) -> FiniteGroup:
    return make_group(GroupSpec.product(G.spec, GroupSpec.cyclic(n)))


@dataclass(frozen=True)
class LiftedStarter:
    base: Starter
    profile: TwoStarterProfile
    n: int
    group: FiniteGroup
    factor: Factor
    starter: Starter


def lift_2n(S: Starter, n: int) -> LiftedStarter:
    """Lift a 2-starter under ``G`` to a ``2n``-starter under ``G x Z_n``."""
    if S.k != 2:
        raise PreconditionError(f"lift needs a 2-starter, got k={S.k}")
    if not isinstance(n, int) or n < 2:
        raise ParameterError(f"lift order n must be an integer >= 2, got {n!r}")
    base = verify_starter(S.group, S.factor, 2)
    if not base.accepted:
        raise PreconditionError(f"base factor is not certified: {base.summary()}")
    profile = two_starter_profile(S)
    GZ = _lift_group(S.group, n)
    ends = (profile.a, profile.b)
    edges = []
    for x in ends:
        for k in range(n):
            edges.append((INF, pair_index(n, x, k)))
            for r in range(k + 1, n):
                edges.append((pair_index(n, x, k), pair_index(n, x, r)))
    for x, y in S.factor.edges:
        if y is INF:
            continue
        for k in range(n):
            for r in range(n):
                edges.append((pair_index(n, x, k), pair_index(n, y, r)))
    H = Factor(GZ, edges)
    report = verify_starter(GZ, H, 2 * n)
    expected = frozenset(pair_index(n, s, k) for s in S.stab for k in range(n))
    if not report.accepted or report.stabilizer != expected:
        raise InvariantViolation(f"lifted factor failed certification: {report.summary()}")
    return LiftedStarter(S, profile, n, GZ, H, report.starter)


def dihedral_double(S: Starter) -> Starter:
    """Turn a 2-starter under ``D_N`` (``N ≡ 2 mod 4``, stabilizer ``{1, s}``)
    into a 4-starter under ``D_2N`` with stabilizer ``{1, s, z, zs}``, where
    ``z = r^(N/2)`` is the central involution of ``D_2N``.
    """
    G = S.group
    if G.spec.family != "dihedral":
        raise PreconditionError(f"dihedral doubling needs a dihedral group, got {G.spec}")
    N = G.order
    if N % 4 != 2:
        raise PreconditionError(f"dihedral doubling needs order N ≡ 2 (mod 4), got N={N}")
    if S.k != 2:
        raise PreconditionError(f"dihedral doubling needs a 2-starter, got k={S.k}")
    half = N // 2
    if S.stab != frozenset({0, half}):
        raise PreconditionError(f"stabilizer must be {{1, s}} = {{0, {half}}}, got {sorted(S.stab)}")
    if not verify_starter(G, S.factor, 2).accepted:
        raise PreconditionError("input factor is not a certified 2-starter")

    D = make_group(GroupSpec.dihedral(2 * N))

    def embed(v):
        # r^i s^j of D_N is read as r^i s^j of D_2N
        if v is INF:
            return INF
        return v if v < half else v - half + N

    z = half  # r^(N/2) in D_2N

    def zm(v):
        return D.table[z][v]

    edges = []
    ends = []
    for u, v in S.factor.edges:
        if v is INF:
            ends.append(embed(u))
            continue
        x, y = embed(u), embed(v)
        edges += [(x, y), (zm(x), zm(y)), (x, zm(y)), (zm(x), y)]
    for e in ends:
        edges += [(INF, e), (INF, zm(e)), (e, zm(e))]
    H = Factor(D, edges)
    report = verify_starter(D, H, 4)
    expected = frozenset({0, N, z, N + z})
    if not report.accepted or report.stabilizer != expected:
        raise InvariantViolation(f"doubled factor failed certification: {report.summary()}")
    return report.starter


def walecki_cycles(p: int) -> list[list]:
    """Hamiltonian decomposition of the complete graph on ``{(A,k),(B,k)} ∪ {∞}``.

    Circle position ``2t`` holds ``("A", t)`` and ``2t + 1`` holds ``("B", t)``.
    ``E_0`` zigzags through positions ``0, 1, 2p-1, 2, 2p-2, ..., p`` and ends at
    ``∞``; ``E_i`` shifts every position by ``i``.
    """
    if not isinstance(p, int) or p < 2:
        raise ParameterError(f"Walecki construction needs p >= 2, got {p!r}")
    n = 2 * p
    base = [0]
    for t in range(1, p):
        base += [t, n - t]
    base.append(p)

    def sym(pos):
        return ("A" if pos % 2 == 0 else "B", pos // 2)

    return [[sym((pos + i) % n) for pos in base] + [INF] for i in range(p)]


def rotated_factor(profile: TwoStarterProfile, i: int, j: int, p: int) -> list[list[tuple[int, int]]]:
    """The ``p`` cycles of ``F_ij`` built from cycle ``x^i`` (``i`` is 1-based)."""
    if not is_prime(p):
        raise ParameterError(f"p must be prime, got {p}")
    if not 1 <= i <= len(profile.other_cycles):
        raise ParameterError(f"cycle index {i} out of range 1..{len(profile.other_cycles)}")
    if not 0 <= j < p:
        raise ParameterError(f"rotation j must lie in 0..{p - 1}, got {j}")
    x = profile.other_cycles[i - 1]
    length = len(x)
    r = length % p
    out = []
    for k in range(p):
        levels = [(t * j + k) % p for t in range(length)]
        if r == 1:
            levels[-1] = ((p - 2) * j + k) % p
        out.append(list(zip(x, levels)))
    return out


def expand_cycle(E: Sequence, profile: TwoStarterProfile, p: int) -> list:
    """Replace every A-B adjacency of a Walecki cycle with the alternating y-path.

    Between ``(a, k)`` and ``(b, t)`` the path is ``(y_1, t), (y_2, k), ...,
    (y_m, k)``; traversed from the ``b`` side it is reversed.
    """
    E = list(E)
    if len(E) != 2 * p + 1 or E[-1] is not INF or INF in E[:-1] or len(set(E[:-1])) != 2 * p:
        raise ParameterError(f"not a Walecki cycle on {2 * p + 1} vertices: {E}")
    for s in E[:-1]:
        if not (isinstance(s, tuple) and s[0] in ("A", "B") and 0 <= s[1] < p):
            raise ParameterError(f"bad Walecki symbol {s!r}")
    a, b, y = profile.a, profile.b, profile.y
    m = len(y)

    def conv(s):
        if s is INF:
            return INF
        return (a if s[0] == "A" else b, s[1])

    out = []
    for idx, u in enumerate(E):
        out.append(conv(u))
        v = E[(idx + 1) % len(E)]
        if u is INF or v is INF or u[0] == v[0]:
            continue
        if u[0] == "A":
            k, t = u[1], v[1]
            out += [(y[l], t if l % 2 == 0 else k) for l in range(m)]
        else:
            t, k = u[1], v[1]
            out += [(y[l], t if l % 2 == 0 else k) for l in reversed(range(m))]
    return out


def _check_split_params(profile: TwoStarterProfile, p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ParameterError(f"split needs a prime p, got {p!r}")
    if p == 2:
        odd = [len(c) for c in profile.other_cycles if len(c) % 2]
        if odd:
            raise PreconditionError(
                f"p = 2 requires every cycle not through ∞ to have even length; found length {odd[0]}"
            )


def split_lift(L: LiftedStarter, p: int) -> list[Factor]:
    """Decompose the lifted ``2p``-starter into ``H_j = Ē_j ∪ ⋃_i F_ij``."""
    profile = L.profile
    _check_split_params(profile, p)
    if L.n != p:
        raise ParameterError(f"lifted starter has n={L.n}, cannot split with p={p}")
    n_cycles = len(profile.other_cycles)
    parts = []
    for j, E in enumerate(walecki_cycles(p)):
        pieces = [expand_cycle(E, profile, p)]
        for i in range(1, n_cycles + 1):
            pieces += rotated_factor(profile, i, j, p)
        parts.append(build_factor(L.group, cycles=[[_to_index(p, v) for v in c] for c in pieces]))

    union: set = set()
    for H in parts:
        if union & H.edges:
            raise InvariantViolation("split pieces are not edge-disjoint")
        union |= H.edges
    if union != L.factor.edges:
        raise InvariantViolation("split pieces do not cover the lifted starter")
    expected = _expected_signature(profile, p)
    for j, H in enumerate(parts):
        if op_signature(H) != expected:
            raise InvariantViolation(f"H_{j} has signature {op_signature(H)}, expected {expected}")
    return parts


def _expected_signature(profile: TwoStarterProfile, p: int) -> OPSignature:
    lengths = [p * (profile.a_inf - 1) + 1]
    for c in profile.other_cycles:
        lengths += [len(c)] * p
    return OPSignature(lengths)


@dataclass
class OPSolution:
    factorization: Factorization
    signature: OPSignature
    lifted: LiftedStarter


def solve_op(S: Starter, p: int) -> OPSolution:
    """Full 2-factorization of the complete graph on ``(G x Z_p) ∪ {∞}``.

    Each orbit translate ``Hg`` of the lifted starter is split as ``{H_j g}``.
    """
    _check_split_params(two_starter_profile(S), p)
    L = lift_2n(S, p)
    parts = split_lift(L, p)
    factors = [act(Hj, g) for g, _ in orbit_translates(L.factor) for Hj in parts]
    fz = Factorization(L.group, 2, factors)
    report = verify_factorization(L.group, fz)
    if not report.ok or len(factors) != L.group.order // 2:
        raise InvariantViolation(f"assembled 2-factors do not partition the graph: {report.to_json()}")
    expected = _expected_signature(L.profile, p)
    for F in factors:
        if op_signature(F) != expected:
            raise InvariantViolation(f"2-factor with signature {op_signature(F)}, expected {expected}")
    return OPSolution(fz, expected, L)
