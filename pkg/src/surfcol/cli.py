"""Command-line front end.

Every command writes one JSON document to stdout (or a text rendering with
``--pretty``).  Exit codes: 0 success, 1 validation or count mismatch,
2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import surfaces
from .catalog import run_table
from .diagrams import PDCode, emit_equations, trace_faces
from .errors import BudgetExceeded, SurfcolError
from .systems import DEFAULT_BUDGET, EquationSystem, brute_force_count, count_colorings, reverse_orientation
from .tribracket import Tribracket, enumerate_tribrackets

OK, MISMATCH, INPUT_ERROR, BUDGET = 0, 1, 2, 3
MAX_ENUM_SIZE = 4


class InputError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except ValueError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _tribracket(path: str) -> Tribracket:
    return Tribracket.from_json(_read_json(path))


def cmd_validate(args) -> tuple[int, dict]:
    report = _tribracket(args.tribracket).validate()
    payload = {"status": "valid" if report.valid else "invalid", **report.as_dict()}
    return (OK if report.valid else MISMATCH), payload


def cmd_count(args) -> tuple[int, dict]:
    t = _tribracket(args.tribracket)
    sys_ = EquationSystem.from_json(_read_json(args.system))
    if args.reverse:
        sys_ = reverse_orientation(sys_)
    count, stats = count_colorings(sys_, t)
    payload = {"status": "ok", "count": count, "stats": stats.as_dict()}
    if args.oracle:
        oracle = brute_force_count(sys_, t, args.max_assignments)
        payload["oracle"] = oracle
        if oracle != count:
            payload["status"] = "solver and oracle disagree"
            return MISMATCH, payload
    return OK, payload


def cmd_table(args) -> tuple[int, dict]:
    doc = _read_json(args.tribracket)
    t = Tribracket.from_json(doc)
    report = run_table(t, args.label or doc.get("name"))
    payload = {"status": "ok" if report.ok else "mismatch", **report.as_dict()}
    payload["_text"] = report.to_text()
    return (OK if report.ok else MISMATCH), payload


def cmd_spin(args) -> tuple[int, dict]:
    plat = surfaces.PlatPresentation.from_json(_read_json(args.plat))
    tp = surfaces.spun_triplane(plat)
    payload = {"status": "ok", "bridges": tp.bridges, "patch_numbers": list(surfaces.patch_numbers(tp))}
    if args.emit_triplane:
        with open(args.emit_triplane, "w") as fh:
            json.dump(tp.to_json(), fh, indent=1)
        payload["triplane"] = args.emit_triplane
    if args.count:
        if not args.tribracket:
            raise InputError("--count needs --tribracket")
        t = _tribracket(args.tribracket)
        knot, _ = count_colorings(surfaces.plat_system(plat), t)
        spun, _ = count_colorings(surfaces.triplane_to_system(tp), t)
        payload.update({"knot": knot, "spun": spun, "equal": knot == spun})
        if knot != spun:
            payload["status"] = "mismatch"
            return MISMATCH, payload
    return OK, payload


def cmd_enumerate(args) -> tuple[int, dict]:
    if args.n < 1 or args.n > MAX_ENUM_SIZE:
        raise InputError(f"size must be between 1 and {MAX_ENUM_SIZE}")
    found = []
    try:
        for t in enumerate_tribrackets(args.n, args.budget):
            found.append(t.tensor.tolist())
            if args.limit is not None and len(found) >= args.limit:
                break
    except BudgetExceeded as exc:
        return BUDGET, {
            "status": "budget exceeded",
            "size": args.n,
            "nodes": exc.progress,
            "count": len(exc.partial),
            "tensors": [t.tensor.tolist() for t in exc.partial][: args.limit],
        }
    return OK, {"status": "ok", "size": args.n, "count": len(found), "tensors": found}


def cmd_bounds(args) -> tuple[int, dict]:
    tp = surfaces.TriplaneDiagram.from_json(_read_json(args.triplane))
    if not surfaces.validate_orientation(tp):
        raise InputError("triplane orientation is invalid")
    t = _tribracket(args.tribracket)
    count, _ = count_colorings(surfaces.triplane_to_system(tp), t)
    report = surfaces.bounds_report(tp, count, t.size)
    payload = {"status": "ok" if report.satisfied else "violated", **report.as_dict()}
    return (OK if report.satisfied else MISMATCH), payload


def cmd_faces(args) -> tuple[int, dict]:
    pd = PDCode.from_json(_read_json(args.pd))
    rad, faces = trace_faces(pd)
    payload = {"status": "ok", "crossings": len(pd), "regions": rad.region_count}
    if args.emit_system or args.tribracket:
        system = emit_equations(rad)
        if args.emit_system:
            payload["system"] = system.to_json()
        if args.tribracket:
            payload["count"] = count_colorings(system, _tribracket(args.tribracket))[0]
    return OK, payload


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="surfcol", description="Tribracket region colorings of knots and surfaces.")
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    p.add_argument("--max-assignments", type=int, default=DEFAULT_BUDGET, help="brute-force oracle budget")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the tribracket axioms")
    s.add_argument("--tribracket", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("count", help="count colorings of an equation system")
    s.add_argument("--tribracket", required=True)
    s.add_argument("--system", required=True)
    s.add_argument("--reverse", action="store_true", help="reverse the orientation first")
    s.add_argument("--oracle", action="store_true", help="cross-check by brute force")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("table", help="recount the bundled catalog")
    s.add_argument("--tribracket", required=True)
    s.add_argument("--label", help="name used to look up stored expectations")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("spin", help="triplane diagram of a spun knot")
    s.add_argument("--plat", required=True)
    s.add_argument("--emit-triplane", metavar="FILE")
    s.add_argument("--count", action="store_true", help="compare knot and spun-knot counts")
    s.add_argument("--tribracket")
    s.set_defaults(func=cmd_spin)

    s = sub.add_parser("enumerate", help="list all tribrackets of a small size")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--limit", type=int)
    s.add_argument("--budget", type=int, default=10_000_000, help="search node budget")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("bounds", help="check the bridge/patch coloring bounds")
    s.add_argument("--triplane", required=True)
    s.add_argument("--tribracket", required=True)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("faces", help="regions of a PD code")
    s.add_argument("--pd", required=True)
    s.add_argument("--emit-system", action="store_true")
    s.add_argument("--tribracket", help="also count colorings")
    s.set_defaults(func=cmd_faces)
    return p


def _render(payload: dict, pretty: bool) -> str:
    text = payload.pop("_text", None)
    if pretty:
        return text if text is not None else json.dumps(payload, indent=2, sort_keys=True)
    return json.dumps(payload, sort_keys=True)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, payload = args.func(args)
    except BudgetExceeded as exc:
        code, payload = BUDGET, {"status": "budget exceeded", "error": str(exc)}
    except (InputError, SurfcolError, OSError) as exc:
        code, payload = INPUT_ERROR, {"status": "error", "error": str(exc)}
    print(_render(payload, args.pretty))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
