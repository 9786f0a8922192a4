"""Command-line front end.

Everything speaks canonical JSON: graphs and cylinder sets are read from
files, results are written to ``-o`` (or stdout) with sorted keys so diffs
stay readable.  Decision verbs exit 0 for yes, 2 for no; any failure exits 1
with a one-line error object on stderr.  The env var ``CYL_NODE_BUDGET``
caps every search.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from collections.abc import Sequence

from .catalog import (
    NEPS_KINDS,
    cone,
    fractional_power,
    graph_minor,
    join_with,
    looped_line_graph,
    neps_product,
    petersen,
    replacement_product,
    subdivision,
    voltage_lift,
    walk_power,
    zigzag_product,
)
from .construct import cyl_product, exponential, uniform_labels
from .core import Graph, isomorphic
from .cylinder import CylinderSet
from .duality import check_duality, is_lower_closed, is_upper_closed
from .errors import CylError, DomainError
from .hom import MODES, count_homs, find_hom, list_homs
from .perm import Perm, PermGroup


class UsageError(CylError):
    """Bad flags or a malformed invocation."""


class _Parser(argparse.ArgumentParser):
    # argparse wants to sys.exit(2) on its own; route through our error
    # channel instead so every failure looks the same on stderr.
    def error(self, message: str):
        raise UsageError(message)


# -- input plumbing -------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise DomainError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from None


def _require(path: str, data, field: str, kind: type) -> None:
    if field not in data:
        raise DomainError(f"{path}: missing field {field!r}")
    if not isinstance(data[field], kind):
        raise DomainError(f"{path}: field {field!r} must be a JSON {kind.__name__}")


def load_graph(path: str) -> Graph:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise DomainError(f"{path}: expected a JSON object")
    _require(path, data, "vertices", list)
    _require(path, data, "edges", list)
    for i, rec in enumerate(data["edges"]):
        if not isinstance(rec, dict) or "tail" not in rec or "head" not in rec:
            raise DomainError(f"{path}: edge #{i} needs 'tail' and 'head'")
    return Graph.from_json(data)


def load_cylinders(path: str) -> CylinderSet:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise DomainError(f"{path}: expected a JSON object")
    _require(path, data, "group", dict)
    _require(path, data, "cylinders", list)
    return CylinderSet.from_json(data)


def load_group(path: str) -> PermGroup:
    """A slot group, either standalone or pulled out of a cylinder set."""
    data = _load_json(path)
    if isinstance(data, dict) and "cylinders" in data:
        return CylinderSet.from_json(data).group
    if isinstance(data, dict) and "degree" in data:
        return PermGroup.from_json(data)
    raise DomainError(f"{path}: expected a group or a cylinder set")


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True, default=str) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_text(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- commands -------------------------------------------------------------------


def _maybe_uniform(g: Graph, cset: CylinderSet, flag: str | None) -> Graph:
    """Resolve --uniform: label every edge of a plain graph at the named
    cylinder key (the value is read as JSON so numeric keys stay numeric)."""
    if flag is None:
        return g
    try:
        key = json.loads(flag)
    except json.JSONDecodeError:
        key = flag
    if key not in cset.keys():
        raise UsageError(f"--uniform {flag!r} is not a key of the cylinder set")
    return uniform_labels(g, key, width=cset.width)


def cmd_product(args) -> int:
    cset = load_cylinders(args.cylinders)
    g = _maybe_uniform(load_graph(args.graph), cset, args.uniform)
    tr = cyl_product(g, cset)
    _emit(tr.graph.to_json(), args.output)
    return 0


def cmd_expo(args) -> int:
    cset = load_cylinders(args.cylinders)
    h = load_graph(args.target)
    et = exponential(cset, h)
    _emit(et.graph.to_json(), args.output)
    return 0


def cmd_reduce(args) -> int:
    """Turn a structured-map question into a plain target-map question.

    The emitted instance is the inflated source graph; a labeled
    homomorphism from it into the (unchanged) target exists exactly when
    the original structured map into the exponential does.
    """
    cset = load_cylinders(args.cylinders)
    g = _maybe_uniform(load_graph(args.graph), cset, args.uniform)
    load_graph(args.target)  # validated; the instance leaves it untouched
    tr = cyl_product(g, cset)
    _emit(tr.graph.to_json(), args.output)
    return 0


def cmd_hom(args) -> int:
    if args.mode not in MODES:
        raise UsageError(f"--mode must be one of {', '.join(MODES)}")
    g = load_graph(args.source)
    h = load_graph(args.target)
    group = None
    if args.mode == "gamma":
        if not args.group:
            raise UsageError("--mode gamma needs --group")
        group = load_group(args.group)
    if args.action == "exists":
        found = find_hom(g, h, mode=args.mode, group=group)
        _emit({"exists": found is not None}, args.output)
        return 0 if found is not None else 2
    if args.action == "count":
        n = count_homs(g, h, mode=args.mode, group=group)
        _emit({"count": n}, args.output)
        return 0 if n else 2
    homs = list_homs(g, h, mode=args.mode, group=group, limit=args.limit)
    _emit({"count": len(homs), "homs": [m.to_json() for m in homs]}, args.output)
    return 0 if homs else 2


def cmd_duality(args) -> int:
    cset = load_cylinders(args.cylinders)
    g = _maybe_uniform(load_graph(args.graph), cset, args.uniform)
    h = load_graph(args.target)
    report = check_duality(g, cset, h)
    _emit(report.to_json(), args.output)
    return 0


def cmd_closed(args) -> int:
    cset = load_cylinders(args.cylinders)
    if args.direction == "lower":
        if not args.target:
            raise UsageError("closed lower needs --target")
        holds = is_lower_closed(cset, load_graph(args.target))
        _emit({"closed": "lower", "holds": holds}, args.output)
    elif args.direction == "upper":
        if not args.graph:
            raise UsageError("closed upper needs --graph")
        holds = is_upper_closed(cset, load_graph(args.graph))
        _emit({"closed": "upper", "holds": holds}, args.output)
    else:  # tight: do both counts agree on this triple?
        if not args.graph or not args.target:
            raise UsageError("closed tight needs --graph and --target")
        report = check_duality(load_graph(args.graph), cset, load_graph(args.target))
        holds = report.tight_on_G
        _emit(report.to_json(), args.output)
    return 0 if holds else 2


def cmd_catalog(args) -> int:
    which = args.builder
    if which == "petersen":
        out = petersen()
    elif which == "power":
        out = walk_power(load_graph(args.graph), args.n)
    elif which == "subdivision":
        out = subdivision(load_graph(args.graph), args.n)
    elif which == "fracpower":
        out = fractional_power(load_graph(args.graph), args.m, args.n)
    elif which == "neps":
        out = neps_product(load_graph(args.left), load_graph(args.right), args.kind)
    elif which == "voltage":
        base = load_graph(args.base)
        raw = _load_json(args.voltages)
        if not isinstance(raw, dict):
            raise DomainError(f"{args.voltages}: expected an object of edge -> images")
        volts = {eid: Perm(images) for eid, images in raw.items()}
        out = voltage_lift(base, volts, args.k)
    elif which == "zigzag":
        out = zigzag_product(load_graph(args.outer), load_graph(args.inner))
    elif which == "replacement":
        out, _ = replacement_product(load_graph(args.outer), load_graph(args.inner))
    elif which == "linegraph":
        out = looped_line_graph(load_graph(args.graph))
    elif which == "join":
        out = join_with(load_graph(args.left), load_graph(args.right))
    elif which == "universal":
        out = cone(load_graph(args.graph))
    else:  # minor
        contract = tuple(args.contract.split(",")) if args.contract else ()
        delete = tuple(args.delete.split(",")) if args.delete else ()
        out = graph_minor(load_graph(args.graph), contract=contract, delete=delete)
    _emit(out.to_json(), args.output)
    return 0


def cmd_iso(args) -> int:
    a = load_graph(args.left)
    b = load_graph(args.right)
    found = isomorphic(a, b)
    if found is None:
        _emit({"isomorphic": False}, args.output)
        return 2
    _emit({"isomorphic": True, "vertices": {str(v): w for v, w in sorted(found["vertices"].items(), key=lambda kv: str(kv[0]))}}, args.output)
    return 0


def cmd_export(args) -> int:
    g = load_graph(args.graph)
    _emit_text(g.to_dot(), args.output)
    return 0


# -- parser ---------------------------------------------------------------------


def _out(p) -> None:
    p.add_argument("-o", "--output", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cyl", description="Cylinder products, exponentials and map queries over JSON graph files.")
    p.add_argument("--seed", type=int, default=0, help="seed for any randomized choices (fixed default keeps runs reproducible)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("product", help="inflate a labeled graph by a cylinder set")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--cylinders", required=True)
    sp.add_argument("--uniform", metavar="KEY", help="label every edge of a plain graph at this cylinder key first")
    _out(sp)
    sp.set_defaults(func=cmd_product)

    sp = sub.add_parser("expo", help="exponential of a target by a cylinder set")
    sp.add_argument("--cylinders", required=True)
    sp.add_argument("--target", required=True)
    _out(sp)
    sp.set_defaults(func=cmd_expo)

    sp = sub.add_parser("hom", help="query maps between two graphs")
    sp.add_argument("action", choices=("exists", "count", "list"))
    sp.add_argument("--source", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--mode", default="labeled", help="plain, labeled or gamma")
    sp.add_argument("--group", help="slot group (or cylinder set) for gamma mode")
    sp.add_argument("--limit", type=int, help="cap for 'list'")
    _out(sp)
    sp.set_defaults(func=cmd_hom)

    sp = sub.add_parser("duality", help="two-sided correspondence report")
    sp.add_argument("check", choices=("check",))
    sp.add_argument("--graph", required=True)
    sp.add_argument("--cylinders", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--uniform", metavar="KEY", help="label every edge of a plain graph at this cylinder key first")
    _out(sp)
    sp.set_defaults(func=cmd_duality)

    sp = sub.add_parser("closed", help="closedness / tightness checks")
    sp.add_argument("direction", choices=("lower", "upper", "tight"))
    sp.add_argument("--cylinders", required=True)
    sp.add_argument("--graph", help="source graph (upper, tight)")
    sp.add_argument("--target", help="target graph (lower, tight)")
    _out(sp)
    sp.set_defaults(func=cmd_closed)

    sp = sub.add_parser("catalog", help="named constructions")
    cat = sp.add_subparsers(dest="builder", required=True)

    c = cat.add_parser("petersen")
    _out(c)
    c = cat.add_parser("power")
    c.add_argument("--graph", required=True)
    c.add_argument("-n", type=int, required=True, help="walk length")
    _out(c)
    c = cat.add_parser("subdivision")
    c.add_argument("--graph", required=True)
    c.add_argument("-n", type=int, required=True, help="edges per stretched edge")
    _out(c)
    c = cat.add_parser("fracpower")
    c.add_argument("--graph", required=True)
    c.add_argument("-m", type=int, required=True, help="walk length")
    c.add_argument("-n", type=int, required=True, help="subdivision first")
    _out(c)
    c = cat.add_parser("neps")
    c.add_argument("--left", required=True)
    c.add_argument("--right", required=True)
    c.add_argument("--kind", required=True, choices=NEPS_KINDS)
    _out(c)
    c = cat.add_parser("voltage")
    c.add_argument("--base", required=True)
    c.add_argument("--voltages", required=True, help="JSON object: edge id -> permutation images")
    c.add_argument("-k", type=int, required=True, help="sheets")
    _out(c)
    c = cat.add_parser("zigzag")
    c.add_argument("--outer", required=True)
    c.add_argument("--inner", required=True)
    _out(c)
    c = cat.add_parser("replacement")
    c.add_argument("--outer", required=True)
    c.add_argument("--inner", required=True)
    _out(c)
    c = cat.add_parser("linegraph")
    c.add_argument("--graph", required=True)
    _out(c)
    c = cat.add_parser("join")
    c.add_argument("--left", required=True)
    c.add_argument("--right", required=True)
    _out(c)
    c = cat.add_parser("universal")
    c.add_argument("--graph", required=True)
    _out(c)
    c = cat.add_parser("minor")
    c.add_argument("--graph", required=True)
    c.add_argument("--contract", help="comma-separated edge ids")
    c.add_argument("--delete", help="comma-separated edge ids")
    _out(c)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("reduce", help="emit the inflated instance whose target-maps decide the structured question")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--cylinders", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--uniform", metavar="KEY", help="label every edge of a plain graph at this cylinder key first")
    _out(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("iso", help="are two graphs isomorphic?")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    _out(sp)
    sp.set_defaults(func=cmd_iso)

    sp = sub.add_parser("export-dot", help="graph JSON to DOT")
    sp.add_argument("--graph", required=True)
    _out(sp)
    sp.set_defaults(func=cmd_export)

    return p


def _fail(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")
    return 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        random.seed(args.seed)
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", str(exc))
    except CylError as exc:
        return _fail(type(exc).__name__, str(exc))
    except OSError as exc:
        return _fail("io", str(exc))


if __name__ == "__main__":
    sys.exit(main())
