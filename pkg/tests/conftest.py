from __future__ import annotations

import pytest

from oberforge import INF, GroupSpec, build_factor, make_group, verify_starter

# Reference 2-starter under Z_12 used throughout: (∞,0,3,9,6) ∪ (1,5,4,2,7,11,10,8)
Z12_CYCLES = [[INF, 0, 3, 9, 6], [1, 5, 4, 2, 7, 11, 10, 8]]


@pytest.fixture(scope="session")
def z12():
    return make_group(GroupSpec.cyclic(12))


@pytest.fixture(scope="session")
def z12_factor(z12):
    return build_factor(z12, cycles=Z12_CYCLES)


@pytest.fixture(scope="session")
def z12_starter(z12, z12_factor):
    return verify_starter(z12, z12_factor, 2).starter


@pytest.fixture(scope="session")
def z4_starter():
    G = make_group(GroupSpec.cyclic(4))
    return verify_starter(G, build_factor(G, cycles=[[INF, 0, 1, 3, 2]]), 2).starter


@pytest.fixture
def criterion(request):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    log = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        log.append((number, line))
        print(line)
        assert ok, line

    return record


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE, [])
    if log:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(log):
            terminalreporter.write_line(line)
