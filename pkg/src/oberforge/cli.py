"""Command-line front end.

Exit status: 0 on success, 1 when valid input is mathematically rejected
(with a report), 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .construct import dihedral_double, lift_2n, solve_op, split_lift
from .errors import NotATwoFactor, OberforgeError, ParameterError, PreconditionError
from .factors import INF, cycles
from .groups import check_rk_necessary
from .search import (
    DEFAULT_NODE_BUDGET,
    DEFAULT_TIME_BUDGET,
    SearchBudgetExceeded,
    SearchSpec,
    enumerate_starters,
    find_starter,
)
from .serialize import (
    InputError,
    factor_from_json,
    factor_to_json,
    factorization_from_json,
    factorization_to_json,
    group_from_json,
    lifted_from_json,
    lifted_to_json,
    load_json,
    starter_certificate,
    write_json,
)
from .starter import OPSignature, develop, op_signature, verify_factorization, verify_starter

EXIT_OK, EXIT_REJECTED, EXIT_USAGE = 0, 1, 2
BUDGET_ENV = "OBERFORGE_BUDGET"


class _Rejected(Exception):
    def __init__(self, payload: dict, text: str):
        super().__init__(text)
        self.payload = payload
        self.text = text


def _emit(args, payload: dict, text: str) -> None:
    if args.pretty:
        print(text)
    else:
        print(json.dumps(payload, indent=1))


def _write_or_print(args, artifact: dict, summary: dict, text: str) -> None:
    if args.out:
        write_json(args.out, artifact)
        summary = {**summary, "written": str(args.out)}
        _emit(args, summary, text + f" -> {args.out}")
    else:
        _emit(args, {**summary, "artifact": artifact}, text)


def _load_starter(path: str, k: int):
    F = factor_from_json(load_json(path))
    report = verify_starter(F.group, F, k)
    if not report.accepted:
        raise _Rejected(report.to_json(), report.summary())
    return report.starter


def _set_str(G, elems) -> str:
    return "{" + ",".join(G.name(x) for x in sorted(elems)) + "}"


def cmd_verify(args) -> int:
    if args.factorization:
        fz = factorization_from_json(load_json(args.factorization))
        report = verify_factorization(fz.group, fz)
        payload = report.to_json()
        if report.ok:
            payload["message"] = f"{len(fz)} {fz.k}-factors partition the complete graph on {fz.group.order + 1} vertices"
            _emit(args, payload, payload["message"])
            return EXIT_OK
        payload["message"] = "not a factorization"
        raise _Rejected(payload, f"not a factorization: {len(report.duplicated)} duplicated, "
                                 f"{len(report.missing)} missing edges, {len(report.irregular)} irregular factors")
    if not args.starter or args.k is None:
        raise ParameterError("verify needs --starter FILE --k K, or --factorization FILE")
    F = factor_from_json(load_json(args.starter))
    report = verify_starter(F.group, F, args.k)
    if not report.accepted:
        lines = [report.summary()] + [f"  {f['condition']}: {f['witnesses']}" for f in report.failures]
        raise _Rejected(report.to_json(), "\n".join(lines))
    text = f"{args.k}-starter certified, stabilizer {_set_str(F.group, report.stabilizer)}"
    _emit(args, report.to_json(), text)
    return EXIT_OK


def cmd_develop(args) -> int:
    S = _load_starter(args.starter, args.k)
    fz = develop(S)
    summary = {"factors": len(fz), "k": fz.k, "vertices": fz.group.order + 1}
    text = f"{len(fz)} {fz.k}-factors developed on {fz.group.order + 1} vertices"
    _write_or_print(args, factorization_to_json(fz), summary, text)
    return EXIT_OK


def cmd_lift(args) -> int:
    S = _load_starter(args.starter, 2)
    L = lift_2n(S, args.n)
    summary = {"k": 2 * args.n, "group": str(L.group.spec), "stabilizer": sorted(L.starter.stab)}
    text = f"{2 * args.n}-starter under {L.group.spec}, stabilizer order {len(L.starter.stab)}"
    _write_or_print(args, lifted_to_json(L), summary, text)
    return EXIT_OK


def cmd_double(args) -> int:
    S = _load_starter(args.starter, 2)
    H = dihedral_double(S)
    summary = {"k": 4, "group": str(H.group.spec), "stabilizer": sorted(H.stab)}
    text = f"4-starter under {H.group.spec}, stabilizer {_set_str(H.group, H.stab)}"
    _write_or_print(args, starter_certificate(H), summary, text)
    return EXIT_OK


def cmd_split(args) -> int:
    L = lifted_from_json(load_json(args.lifted))
    p = args.p if args.p is not None else L.n
    parts = split_lift(L, p)
    sig = op_signature(parts[0])
    docs = [factor_to_json(H) for H in parts]
    summary = {"parts": len(parts), "signature": str(sig)}
    text = f"{len(parts)} two-factors, each {sig.pretty() if args.pretty else sig}"
    if args.out_dir:
        out = Path(args.out_dir)
        paths = []
        for j, doc in enumerate(docs):
            path = out / f"H_{j}.json"
            write_json(path, doc)
            paths.append(str(path))
        _emit(args, {**summary, "written": paths}, text + f" -> {out}")
    else:
        _emit(args, {**summary, "factors": docs}, text)
    return EXIT_OK


def cmd_solve(args) -> int:
    S = _load_starter(args.starter, 2)
    sol = solve_op(S, args.p)
    fz = sol.factorization
    shown = sol.signature.pretty() if args.pretty else str(sol.signature)
    message = f"{shown} solved on {fz.group.order + 1} vertices, {len(fz)} two-factors"
    summary = {
        "signature": str(sol.signature),
        "lengths": sol.signature.to_json(),
        "vertices": fz.group.order + 1,
        "two_factors": len(fz),
        "message": message,
    }
    _write_or_print(args, factorization_to_json(fz), summary, message)
    return EXIT_OK


def _budget_defaults() -> tuple[int | None, float | None]:
    raw = os.environ.get(BUDGET_ENV)
    if not raw:
        return DEFAULT_NODE_BUDGET, DEFAULT_TIME_BUDGET
    nodes, _, secs = raw.partition(":")
    try:
        return int(nodes), float(secs) if secs else DEFAULT_TIME_BUDGET
    except ValueError:
        raise ParameterError(f"{BUDGET_ENV} must look like NODES or NODES:SECONDS, got {raw!r}") from None


def _search_spec(args) -> SearchSpec:
    nodes, secs = _budget_defaults()
    if args.spec:
        data = load_json(args.spec)
        data.setdefault("node_budget", nodes)
        data.setdefault("time_budget", secs)
        spec = SearchSpec.from_json(data)
    else:
        if args.group is None or args.k is None:
            raise ParameterError("search needs --spec, or --group and --k")
        stab = None
        if args.stabilizer:
            stab = frozenset(int(x) for x in args.stabilizer.split(","))
        spec = SearchSpec(
            group=group_from_json(load_json(args.group)).spec,
            k=args.k,
            target_signature=OPSignature.parse(args.signature) if args.signature else None,
            required_stabilizer=stab,
            node_budget=nodes,
            time_budget=secs,
        )
    overrides = {}
    if args.nodes is not None:
        overrides["node_budget"] = args.nodes
    if args.seconds is not None:
        overrides["time_budget"] = args.seconds
    if overrides:
        spec = SearchSpec(**{**spec.__dict__, **overrides})
    return spec


def cmd_search(args) -> int:
    spec = _search_spec(args)
    if args.limit is not None:
        try:
            found = enumerate_starters(spec, args.limit)
        except SearchBudgetExceeded as exc:
            payload = {"status": "budget_exceeded", "nodes": exc.nodes, "found": len(exc.partial),
                       "starters": [starter_certificate(S) for S in exc.partial]}
            raise _Rejected(payload, str(exc)) from None
        payload = {"status": "enumerated", "count": len(found),
                   "starters": [starter_certificate(S) for S in found]}
        text = f"{len(found)} starters enumerated"
        if args.out:
            write_json(args.out, payload)
            text += f" -> {args.out}"
            payload = {k: v for k, v in payload.items() if k != "starters"} | {"written": args.out}
        _emit(args, payload, text)
        return EXIT_OK
    outcome = find_starter(spec)
    info = {"status": outcome.status, "nodes": outcome.nodes, "elapsed": round(outcome.elapsed, 3)}
    if outcome.status != "found":
        verb = "no starter exists" if outcome.status == "exhausted" else "budget exceeded"
        raise _Rejected(info, f"{verb} ({outcome.nodes} nodes)")
    S = outcome.starter
    G = S.group
    text = f"found {S.k}-starter under {G.spec}, stabilizer {_set_str(G, S.stab)}"
    if S.k == 2:
        text += ", cycles " + " ".join(
            "(" + ",".join("∞" if v is INF else G.name(v) for v in c) + ")" for c in cycles(S.factor)
        )
    _write_or_print(args, starter_certificate(S), info, text)
    return EXIT_OK


def cmd_analyze(args) -> int:
    G = group_from_json(load_json(args.group))
    report = check_rk_necessary(G, args.k)
    payload = report.to_json()
    lines = [
        f"{G.spec}, k={args.k}: {report.verdict}",
        f"divisibility_ok: {str(report.divisibility_ok).lower()}",
        f"parity_ok: {str(report.parity_ok).lower()}",
        f"class_bound_ok: {str(report.class_bound_ok).lower()} "
        f"({report.involution_class_count} involution classes, bound {report.class_bound})",
        f"central_product_ok: {str(report.central_product_ok).lower()}",
        *report.reasons,
    ]
    if not report.passed:
        raise _Rejected(payload, "\n".join(lines))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_signature(args) -> int:
    F = factor_from_json(load_json(args.factor))
    try:
        sig = op_signature(F)
    except NotATwoFactor as exc:
        bad = {("inf" if v is INF else v): d for v, d in exc.bad_degrees.items()}
        raise _Rejected({"error": str(exc), "witnesses": [{"vertex": v, "degree": d} for v, d in bad.items()]},
                        f"{exc}: degrees {bad}") from None
    _emit(args, {"signature": str(sig), "lengths": sig.to_json()}, sig.pretty())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")

    parser = argparse.ArgumentParser(prog="oberforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="certify a k-starter or a factorization")
    p.add_argument("--starter")
    p.add_argument("--k", type=int)
    p.add_argument("--factorization")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("develop", parents=[common], help="develop a starter into its factorization")
    p.add_argument("--starter", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_develop)

    p = sub.add_parser("lift", parents=[common], help="lift a 2-starter to a 2n-starter under G x Z_n")
    p.add_argument("--starter", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("double-dihedral", parents=[common], help="2-starter under D_N to 4-starter under D_2N")
    p.add_argument("--starter", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_double)

    p = sub.add_parser("split", parents=[common], help="split a lifted 2p-starter into p 2-factors")
    p.add_argument("--lifted", required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("solve-op", parents=[common], help="solve the Oberwolfach instance over G x Z_p")
    p.add_argument("--starter", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("search", parents=[common], help="backtracking search for a k-starter")
    p.add_argument("--spec", help="SearchSpec JSON file or inline JSON")
    p.add_argument("--group", help="GroupSpec JSON file or inline JSON")
    p.add_argument("--k", type=int)
    p.add_argument("--signature", help='e.g. "OP(3, ^2 4)" or "3,4,4"')
    p.add_argument("--stabilizer", help="comma-separated element indices the stabilizer must contain")
    p.add_argument("--nodes", type=int)
    p.add_argument("--seconds", type=float)
    p.add_argument("--limit", type=int, help="enumerate up to this many starters")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("analyze", parents=[common], help="necessary conditions for G to be R_k")
    p.add_argument("--group", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("signature", parents=[common], help="OP signature of a 2-factor")
    p.add_argument("--factor", required=True)
    p.set_defaults(func=cmd_signature)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except _Rejected as rej:
        _emit(args, rej.payload, rej.text)
        return EXIT_REJECTED
    except PreconditionError as exc:
        _emit(args, {"error": "precondition", "message": str(exc)}, f"rejected: {exc}")
        return EXIT_REJECTED
    except (InputError, ParameterError, OSError) as exc:
        print(f"oberforge {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OberforgeError as exc:
        print(f"oberforge {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
