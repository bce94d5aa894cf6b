"""k-starters, their orbit development, and factorization checks."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InvariantViolation, NotATwoFactor, ParameterError
from .factors import (
    INF,
    Factor,
    act,
    complete_graph_edges,
    cycle_structure,
    difference_list,
    stabilizer,
)
from .groups import FiniteGroup

__all__ = [
    "Starter",
    "StarterReport",
    "Factorization",
    "FactorizationReport",
    "OPSignature",
    "verify_starter",
    "certify_starter",
    "orbit_translates",
    "develop",
    "verify_factorization",
    "op_signature",
]


@dataclass(frozen=True)
class Starter:
    """A factor certified as a k-starter, together with its stabilizer."""

    factor: Factor
    k: int
    stab: frozenset[int]

    @property
    def group(self) -> FiniteGroup:
        return self.factor.group


@dataclass
class StarterReport:
    accepted: bool
    k: int
    stabilizer: frozenset[int]
    failures: list[dict] = field(default_factory=list)
    starter: Starter | None = None

    def failed(self, condition: str) -> bool:
        return any(f["condition"] == condition for f in self.failures)

    def summary(self) -> str:
        stab = "{" + ",".join(map(str, sorted(self.stabilizer))) + "}"
        if self.accepted:
            return f"{self.k}-starter certified, stabilizer {stab}"
        return f"not a {self.k}-starter: " + "; ".join(f["message"] for f in self.failures)

    def to_json(self) -> dict:
        return {
            "accepted": self.accepted,
            "k": self.k,
            "stabilizer": sorted(self.stabilizer),
            "message": self.summary(),
            "failures": [
                {"condition": f["condition"], "message": f["message"], "witnesses": f["witnesses"]}
                for f in self.failures
            ],
        }


def _check_k(G: FiniteGroup, k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise ParameterError(f"k must be an integer >= 2, got {k!r}")
    if G.order % k:
        raise ParameterError(f"k={k} must divide the group order {G.order}")


def verify_starter(G: FiniteGroup, F: Factor, k: int) -> StarterReport:
    """Check the two starter conditions plus k-regularity, collecting witnesses."""
    _check_k(G, k)
    if F.group != G:
        raise ParameterError(f"factor lives over {F.group.spec}, not {G.spec}")
    failures = []

    bad = [{"vertex": _vjson(v), "degree": len(ns)} for v, ns in F.adjacency.items() if len(ns) != k]
    if bad:
        failures.append({
            "condition": "k_factor",
            "message": f"{len(bad)} vertices do not have degree {k}",
            "witnesses": bad,
        })

    stab = stabilizer(F)
    if len(stab) != k:
        failures.append({
            "condition": "stabilizer_order",
            "message": f"stabilizer has order {len(stab)}, expected {k}",
            "witnesses": sorted(stab),
        })

    diffs = difference_list(F)
    uncovered = [x for x in range(1, G.order) if diffs[x] == 0]
    if uncovered:
        failures.append({
            "condition": "difference_coverage",
            "message": f"{len(uncovered)} non-identity elements are not covered by the differences",
            "witnesses": uncovered,
        })

    report = StarterReport(accepted=not failures, k=k, stabilizer=stab, failures=failures)
    if report.accepted:
        report.starter = Starter(F, k, stab)
    return report


def certify_starter(F: Factor, k: int) -> Starter:
    """Like :func:`verify_starter` but raise on rejection."""
    report = verify_starter(F.group, F, k)
    if not report.accepted:
        raise ParameterError(report.summary())
    return report.starter


def _vjson(v):
    return "inf" if v is INF else v


@dataclass
class Factorization:
    group: FiniteGroup
    k: int
    factors: list[Factor]

    def __len__(self) -> int:
        return len(self.factors)


@dataclass
class FactorizationReport:
    ok: bool
    factor_count: int
    duplicated: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    irregular: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "factor_count": self.factor_count,
            "witnesses": {
                "duplicated_edges": [[_vjson(u), _vjson(v)] for u, v in self.duplicated],
                "missing_edges": [[_vjson(u), _vjson(v)] for u, v in self.missing],
                "irregular_factors": self.irregular,
            },
        }


def orbit_translates(F: Factor) -> list[tuple[int, Factor]]:
    """Distinct translates ``Fg`` with the least ``g`` that produces each one."""
    seen: set = set()
    out = []
    for g in range(F.group.order):
        Fg = act(F, g)
        if Fg.edges not in seen:
            seen.add(Fg.edges)
            out.append((g, Fg))
    return out


def develop(S: Starter) -> Factorization:
    """The G-orbit of a starter, checked to be a 1-rotational k-factorization."""
    G = S.group
    factors = [Fg for _, Fg in orbit_translates(S.factor)]
    result = Factorization(G, S.k, factors)
    report = verify_factorization(G, result)
    if not report.ok or len(factors) != G.order // S.k:
        raise InvariantViolation(
            f"orbit of a certified {S.k}-starter is not a factorization: {report.to_json()['witnesses']}"
        )
    return result


def verify_factorization(G: FiniteGroup, fz: Factorization) -> FactorizationReport:
    """Check that the factors are k-regular and partition the complete graph."""
    counts: Counter = Counter()
    irregular = []
    for i, F in enumerate(fz.factors):
        if F.group != G:
            raise ParameterError(f"factor {i} lives over {F.group.spec}, not {G.spec}")
        counts.update(F.edges)
        bad = {v: len(ns) for v, ns in F.adjacency.items() if len(ns) != fz.k}
        if bad:
            v, d = next(iter(bad.items()))
            irregular.append({"factor": i, "vertex": _vjson(v), "degree": d})
    complete = complete_graph_edges(G)
    duplicated = sorted(e for e, c in counts.items() if c > 1)
    missing = sorted(complete - counts.keys())
    ok = not (duplicated or missing or irregular)
    return FactorizationReport(ok, len(fz.factors), duplicated, missing, irregular)


_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class OPSignature:
    """Multiset of cycle lengths of a 2-factor, as in ``OP(13, ^3 8)``.

    Rendering orders lengths by (multiplicity, length).
    """

    __slots__ = ("lengths",)

    def __init__(self, lengths: Iterable[int]):
        lengths = tuple(sorted(int(x) for x in lengths))
        if not lengths:
            raise ParameterError("an OP signature needs at least one cycle")
        if lengths[0] < 3:
            raise ParameterError(f"cycle lengths must be >= 3, got {lengths[0]}")
        self.lengths = lengths

    @property
    def order(self) -> int:
        return sum(self.lengths)

    def counts(self) -> list[tuple[int, int]]:
        c = Counter(self.lengths)
        return sorted(((length, mult) for length, mult in c.items()), key=lambda lm: (lm[1], lm[0]))

    def __eq__(self, other) -> bool:
        return isinstance(other, OPSignature) and self.lengths == other.lengths

    def __hash__(self) -> int:
        return hash(self.lengths)

    def __repr__(self) -> str:
        return f"OPSignature({list(self.lengths)})"

    def __str__(self) -> str:
        parts = [f"^{m} {length}" if m > 1 else str(length) for length, m in self.counts()]
        return f"OP({', '.join(parts)})"

    def pretty(self) -> str:
        parts = [f"{str(m).translate(_SUP)}{length}" if m > 1 else str(length) for length, m in self.counts()]
        return f"OP({', '.join(parts)})"

    def to_json(self) -> list[int]:
        return list(self.lengths)

    @classmethod
    def parse(cls, text) -> OPSignature:
        """Accept a list of lengths or a string like ``"OP(13, ^3 8)"`` / ``"13,8,8,8"``."""
        if isinstance(text, OPSignature):
            return text
        if isinstance(text, (list, tuple)):
            return cls(text)
        s = str(text).strip()
        m = re.fullmatch(r"(?:OP)?\s*\((.*)\)", s)
        body = m.group(1) if m else s
        lengths = []
        for part in filter(None, (p.strip() for p in body.split(","))):
            mm = re.fullmatch(r"(?:\^(\d+)\s*)?(\d+)", part)
            if not mm:
                raise ParameterError(f"cannot parse signature component {part!r}")
            lengths += [int(mm.group(2))] * int(mm.group(1) or 1)
        return cls(lengths)


def op_signature(F: Factor) -> OPSignature:
    cs = cycle_structure(F)
    if not cs.is_two_factor:
        raise NotATwoFactor("OP signature needs a 2-regular spanning factor", cs.bad_degrees)
    return OPSignature(cs.lengths)
