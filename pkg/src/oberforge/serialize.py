"""JSON file formats.

Vertices are element indices, with the string ``"inf"`` for ``∞``. A factor is
``{"group": GroupSpec, "cycles": [...]}`` or ``{"group": GroupSpec, "edges": [...]}``.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .construct import LiftedStarter, lift_2n
from .errors import OberforgeError, ParameterError
from .factors import INF, Factor, build_factor, cycle_structure, cycles, difference_list
from .groups import GroupSpec, make_group
from .starter import Factorization, Starter, verify_starter

__all__ = [
    "InputError",
    "load_json",
    "write_json",
    "vertex_to_json",
    "vertex_from_json",
    "group_from_json",
    "factor_to_json",
    "factor_from_json",
    "factorization_to_json",
    "factorization_from_json",
    "lifted_to_json",
    "lifted_from_json",
    "starter_certificate",
]


class InputError(OberforgeError):
    """A file or inline argument could not be read or parsed."""


def load_json(source: str):
    """Parse ``source`` as a path to a JSON file, or as inline JSON text."""
    text = None
    p = Path(source)
    try:
        if p.is_file():
            text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc
    origin = str(p) if text is not None else "inline argument"
    if text is None:
        if not source.lstrip().startswith(("{", "[")):
            raise InputError(f"no such file: {source}")
        text = source
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {origin} at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def write_json(path: str | os.PathLike, payload) -> None:
    """Write ``payload`` atomically (temp file in the same directory, then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def vertex_to_json(v):
    return "inf" if v is INF else v


def vertex_from_json(v):
    if v == "inf":
        return INF
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    raise ParameterError(f"vertex must be an integer or 'inf', got {v!r}")


def group_from_json(data):
    return make_group(GroupSpec.from_json(data))


def factor_to_json(F: Factor) -> dict:
    out = {"group": F.group.spec.to_json()}
    if cycle_structure(F).is_two_factor:
        out["cycles"] = [[vertex_to_json(v) for v in c] for c in cycles(F)]
    else:
        out["edges"] = [[vertex_to_json(u), vertex_to_json(v)] for u, v in F.sorted_edges()]
    return out


def factor_from_json(data) -> Factor:
    if not isinstance(data, dict) or "group" not in data:
        raise ParameterError("factor JSON needs a 'group' key")
    if "cycles" not in data and "edges" not in data:
        raise ParameterError("factor JSON needs 'cycles' or 'edges'")
    G = group_from_json(data["group"])
    cyc = [[vertex_from_json(v) for v in c] for c in data.get("cycles", [])]
    edges = []
    for e in data.get("edges", []):
        if len(e) != 2:
            raise ParameterError(f"edge must have two endpoints, got {e!r}")
        edges.append(tuple(vertex_from_json(v) for v in e))
    return build_factor(G, cycles=cyc, edges=edges)


def factorization_to_json(fz: Factorization) -> dict:
    return {
        "group": fz.group.spec.to_json(),
        "k": fz.k,
        "factors": [factor_to_json(F) for F in fz.factors],
    }


def factorization_from_json(data) -> Factorization:
    if not isinstance(data, dict) or not {"group", "k", "factors"} <= set(data):
        raise ParameterError("factorization JSON needs 'group', 'k' and 'factors'")
    G = group_from_json(data["group"])
    factors = [factor_from_json(f) for f in data["factors"]]
    return Factorization(G, data["k"], factors)


def lifted_to_json(L: LiftedStarter) -> dict:
    return {
        "base": factor_to_json(L.base.factor),
        "n": L.n,
        "profile": L.profile.to_json(),
        "factor": factor_to_json(L.factor),
    }


def lifted_from_json(data) -> LiftedStarter:
    """Rebuild a lifted starter from file and check it against a fresh lift."""
    if not isinstance(data, dict) or not {"base", "n", "factor"} <= set(data):
        raise ParameterError("lifted starter JSON needs 'base', 'n' and 'factor'")
    base = factor_from_json(data["base"])
    report = verify_starter(base.group, base, 2)
    if not report.accepted:
        raise ParameterError(f"base factor is not a 2-starter: {report.summary()}")
    L = lift_2n(report.starter, data["n"])
    if factor_from_json(data["factor"]) != L.factor:
        raise ParameterError("stored lifted factor does not match the lift of its base")
    if "profile" in data and data["profile"] != L.profile.to_json():
        raise ParameterError("stored profile does not match the base starter")
    return L


def starter_certificate(S: Starter) -> dict:
    out = factor_to_json(S.factor)
    diffs = difference_list(S.factor)
    out["certificate"] = {
        "k": S.k,
        "stabilizer": sorted(S.stab),
        "difference_multiplicities": {str(x): diffs[x] for x in range(1, S.group.order)},
    }
    return out
