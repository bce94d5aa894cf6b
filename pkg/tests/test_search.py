from __future__ import annotations

import pytest

import oracles
from oberforge import (
    INF,
    GroupSpec,
    ParameterError,
    SearchSpec,
    build_factor,
    enumerate_starters,
    find_starter,
    make_group,
)
from oberforge.factors import cycles
from oberforge.search import SearchBudgetExceeded

# Number of k-starters per group, frozen from oracles.starters_by_brute_force
# (exhaustive subset enumeration over all k-factors).
BRUTE_FORCE_COUNTS = [
    (GroupSpec.cyclic(2), 2, 1),
    (GroupSpec.cyclic(4), 2, 4),
    (GroupSpec.cyclic(4), 4, 1),
    (GroupSpec.dihedral(4), 2, 0),
    (GroupSpec.cyclic(6), 2, 15),
    (GroupSpec.dihedral(6), 2, 9),
    (GroupSpec.cyclic(6), 6, 1),
    (GroupSpec.dihedral(6), 6, 1),
]


@pytest.mark.parametrize("spec,k,count", BRUTE_FORCE_COUNTS, ids=lambda v: str(v))
def test_enumeration_matches_brute_force_counts(spec, k, count):
    found = enumerate_starters(SearchSpec(spec, k), 100)
    assert len(found) == count
    assert len({S.factor.edges for S in found}) == count


@pytest.mark.parametrize("spec,k", [(GroupSpec.cyclic(4), 2), (GroupSpec.dihedral(6), 2)])
def test_enumeration_matches_brute_force_sets(spec, k):
    G = make_group(spec)
    expected = oracles.starters_by_brute_force(G.mul, G.order, k)
    found = {oracles.to_edge_sets(S.factor) for S in enumerate_starters(SearchSpec(spec, k), 100)}
    assert found == expected


def test_z4_first_starter():
    res = find_starter(SearchSpec(GroupSpec.cyclic(4), 2))
    assert res.status == "found"
    assert cycles(res.starter.factor) == [[INF, 1, 0, 2, 3]]


def test_deterministic():
    spec = SearchSpec(GroupSpec.cyclic(12), 2, "OP(5, 8)")
    a = find_starter(spec)
    b = find_starter(spec)
    assert a.starter.factor == b.starter.factor
    assert a.nodes == b.nodes


def test_signature_respected():
    res = find_starter(SearchSpec(GroupSpec.dihedral(10), 2, "OP(3, ^2 4)"))
    assert res.status == "found"
    assert sorted(len(c) for c in cycles(res.starter.factor)) == [3, 4, 4]


def test_required_stabilizer_respected():
    res = find_starter(SearchSpec(GroupSpec.dihedral(12), 4, required_stabilizer=frozenset({3})))
    assert res.status == "found" and 3 in res.starter.stab


def test_d8_k4_exhausted():
    res = find_starter(SearchSpec(GroupSpec.dihedral(8), 4))
    assert res.status == "exhausted"


def test_budget_exceeded():
    spec = SearchSpec(GroupSpec.cyclic(12), 2, "OP(5, 8)", node_budget=5)
    assert find_starter(spec).status == "budget_exceeded"
    with pytest.raises(SearchBudgetExceeded) as info:
        enumerate_starters(SearchSpec(GroupSpec.cyclic(6), 2, node_budget=30), 100)
    assert isinstance(info.value.partial, list)


def test_limit_zero_and_negative():
    spec = SearchSpec(GroupSpec.cyclic(6), 2)
    assert enumerate_starters(spec, 0) == []
    with pytest.raises(ParameterError):
        enumerate_starters(spec, -1)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"group": GroupSpec.cyclic(6), "k": 4},
        {"group": GroupSpec.cyclic(6), "k": 1},
        {"group": GroupSpec.cyclic(6), "k": 2, "target_signature": "OP(3, 3)"},
        {"group": GroupSpec.cyclic(6), "k": 6, "target_signature": "OP(3, 4)"},
        {"group": GroupSpec.cyclic(6), "k": 2, "required_stabilizer": frozenset({7})},
    ],
)
def test_invalid_spec(kwargs):
    with pytest.raises(ParameterError):
        SearchSpec(**kwargs)


def test_required_stabilizer_too_large():
    with pytest.raises(ParameterError):
        find_starter(SearchSpec(GroupSpec.cyclic(12), 2, required_stabilizer=frozenset({1})))


def test_spec_json_round_trip():
    spec = SearchSpec(GroupSpec.dihedral(6), 2, "OP(3, 4)", frozenset({3}), node_budget=100, time_budget=2.0)
    assert SearchSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ParameterError):
        SearchSpec.from_json({"group": {"family": "cyclic", "n": 4}, "k": 2, "bogus": 1})


def test_z5_k2_rejected():
    with pytest.raises(ParameterError, match="divide"):
        SearchSpec(GroupSpec.cyclic(5), 2)


def test_known_z4_starter_enumerated():
    found = {S.factor.edges: S for S in enumerate_starters(SearchSpec(GroupSpec.cyclic(4), 2), 10)}
    G = make_group(GroupSpec.cyclic(4))
    target = build_factor(G, cycles=[[INF, 0, 1, 3, 2]]).edges
    assert found[target].stab == {0, 2}


def test_exhausted_agrees_with_naive_enumeration():
    G = make_group(GroupSpec.dihedral(4))
    assert find_starter(SearchSpec(GroupSpec.dihedral(4), 2)).status == "exhausted"
    assert not oracles.starters_by_brute_force(G.mul, G.order, 2)


def test_z12_signature_limit_one():
    (S,) = enumerate_starters(SearchSpec(GroupSpec.cyclic(12), 2, "OP(5, 8)"), 1)
    assert sorted(len(c) for c in cycles(S.factor)) == [5, 8]
