"""``genoop`` command line.

Exit status: 0 on success, 1 when an analysis fails (invalid interval, bound
cycle, single-nesting violation, subtype judgment false), 2 on usage, parse
or resolution errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .erasure import apply_raw_model, model_raw_type
from .errors import GenoopError
from .generify import generify
from .graph import VARIANCES, build_graph, check_self_similarity, emit_dot
from .parser import parse_program, parse_type, render
from .signatures import NominalInterval, build_signature, check_interval, check_noncircularity, \
    check_single_nesting
from .subtyping import SubtypeChecker, oracle_for, supertype_chain
from .syntax import SourceUnit
from .table import ClassTable
from .terms import render_type


class UsageError(GenoopError):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--stdlib", action="store_true",
                        help="add the demo classes Comparable, Enum, List, Shape and Canvas")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--short-names", action="store_true", help="render Object/Null as O/N")

    p = argparse.ArgumentParser(prog="genoop", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", parents=[common], help="parse and re-render MiniGen files")
    sp.add_argument("files", nargs="+")

    sp = sub.add_parser("sig", parents=[common], help="print class signature constructors")
    sp.add_argument("files", nargs="+")

    sp = sub.add_parser("generify", parents=[common], help="fully generify every class")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--long-names", action="store_true",
                    help="render Object/Null in full inside intervals")

    sp = sub.add_parser("subtype", parents=[common], help="decide S <: T")
    sp.add_argument("sub")
    sp.add_argument("sup")
    sp.add_argument("files", nargs="*")

    sp = sub.add_parser("chain", parents=[common], help="print the ascending supertype chain")
    sp.add_argument("type")
    sp.add_argument("files", nargs="*")
    sp.add_argument("--depth", type=int, required=True)

    sp = sub.add_parser("graph", parents=[common], help="explore the subtyping graph")
    sp.add_argument("files", nargs="*")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--seed", action="append", default=[],
                    help="seed type (repeatable); default: every non-generic declared class")
    sp.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    sp.add_argument("--highlight", choices=VARIANCES)
    sp.add_argument("--via", help="one-parameter class for --highlight and the self-similarity report")

    sp = sub.add_parser("erase", parents=[common], help="model raw types from a legacy/generic pair")
    sp.add_argument("legacy")
    sp.add_argument("generic")
    sp.add_argument("--class", dest="class_name")

    sp = sub.add_parser("check", parents=[common],
                        help="interval validity, non-circularity and single nesting")
    sp.add_argument("files", nargs="*")
    sp.add_argument("--assert-subtype", nargs=2, action="append", default=[], metavar=("S", "T"))
    return p


def _load(paths) -> list:
    units = []
    for path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from None
        units.append(parse_program(text, str(path)))
    return units


def _table(units, stdlib: bool) -> ClassTable:
    return ClassTable.build(*units, stdlib=stdlib)


def _declared(units) -> list:
    return [c for u in units for c in u.classes]


def _each(units, fn) -> list:
    """Apply ``fn`` to every class, naming the file in any error."""
    out = []
    for u in units:
        for c in u.classes:
            try:
                out.append(fn(c))
            except GenoopError as e:
                raise type(e)(f"{u.source_name}: {e}") from None
    return out


def _type(text: str, table: ClassTable):
    t = parse_type(text)
    table.check_type(t)
    return t


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _cmd_parse(args, out) -> int:
    units = _load(args.files)
    if args.json:
        out.write(_dump([{"class": c.name, "source": render(c, args.short_names)}
                         for c in _declared(units)]) + "\n")
    else:
        out.write(render(SourceUnit(tuple(_declared(units))), args.short_names))
    return 0


def _cmd_sig(args, out) -> int:
    units = _load(args.files)
    table = _table(units, args.stdlib)
    sigs = _each(units, lambda c: build_signature(c, table))
    if args.json:
        out.write(_dump([s.to_json() for s in sigs]) + "\n")
        return 0
    for s in sigs:
        out.write(f"{s.name}({', '.join(s.params)})\n")
        for sup in s.supers:
            out.write(f"  super {render_type(sup, args.short_names)}\n")
        for label, t in s.fields:
            out.write(f"  field {label}: {render_type(t, args.short_names)}\n")
        for label, ps, r in s.methods:
            ps = ", ".join(render_type(p, args.short_names) for p in ps)
            out.write(f"  method {label}({ps}): {render_type(r, args.short_names)}\n")
    return 0


def _cmd_generify(args, out) -> int:
    units = _load(args.files)
    table = _table(units, args.stdlib)
    results = _each(units, lambda c: generify(c, table))
    short = args.short_names or not args.long_names
    if args.json:
        out.write(_dump([g.to_json(short) for g in results]) + "\n")
    else:
        out.write(render(SourceUnit(tuple(g.decl for g in results)), short))
    return 0


def _cmd_subtype(args, out) -> int:
    table = _table(_load(args.files), args.stdlib)
    s, t = _type(args.sub, table), _type(args.sup, table)
    d = SubtypeChecker(table).derive(s, t)
    if args.json:
        out.write(_dump({"sub": render_type(s), "sup": render_type(t), "holds": d is not None,
                         "derivation": d.lines() if d else []}) + "\n")
    else:
        out.write("true\n" if d else "false\n")
        if d:
            out.write("\n".join(d.lines(1)) + "\n")
    return 0 if d else 1


def _cmd_chain(args, out) -> int:
    if args.depth < 0:
        raise UsageError("--depth must be non-negative")
    table = _table(_load(args.files), args.stdlib)
    chain = supertype_chain(_type(args.type, table), args.depth, table)
    rendered = [render_type(t, args.short_names) for t in chain]
    if args.json:
        out.write(_dump(rendered) + "\n")
    else:
        out.write("".join(f"{r}\n" for r in rendered))
    return 0


def _cmd_graph(args, out) -> int:
    if args.depth < 0:
        raise UsageError("--depth must be non-negative")
    if args.highlight and not args.via:
        raise UsageError("--highlight needs --via CLASS")
    units = _load(args.files)
    table = _table(units, args.stdlib)
    if args.seed:
        seeds = [_type(s, table) for s in args.seed]
    else:
        seeds = [c.as_type() for c in _declared(units) if not c.type_params]
    g = build_graph(table, seeds, args.depth)
    if args.dot:
        out.write(emit_dot(g, args.highlight, args.via))
        return 0
    report = check_self_similarity(g, args.via, table) if args.via else None
    if args.json:
        data = g.to_json()
        if report:
            data["self_similarity"] = {
                v: {"pairs": r.pairs_checked, "counterexamples": [list(c) for c in r.counterexamples]}
                for v, r in report.items()
            }
        out.write(_dump(data) + "\n")
    else:
        for key in g.nodes:
            out.write(f"{key}\n")
        for e in g.edges:
            out.write(f"{e.sub} <: {e.sup}  [{e.rule}]\n")
        if report:
            for v, r in report.items():
                out.write(f"{v}: {r.pairs_checked} pairs, {len(r.counterexamples)} counterexamples\n")
    if report and not all(r.ok for r in report.values()):
        return 1
    return 0


def _cmd_erase(args, out) -> int:
    legacy_units = _load([args.legacy])
    generic_units = _load([args.generic])
    table = _table(generic_units, args.stdlib)
    legacy_classes = {c.name: c for c in _declared(legacy_units)}
    generic_classes = _declared(generic_units)
    if args.class_name:
        generic_classes = [c for c in generic_classes if c.name == args.class_name]
        if not generic_classes:
            raise UsageError(f"no class {args.class_name} in {args.generic}")
    models = []
    for c in generic_classes:
        if c.name not in legacy_classes:
            raise UsageError(f"{args.legacy} has no class {c.name}")
        g = generify(c, table)
        models.append((model_raw_type(legacy_classes[c.name], g), g))
    if args.json:
        out.write(_dump([m.to_json() for m, _ in models]) + "\n")
    else:
        for m, g in models:
            subst = ", ".join(f"{v}={render_type(t, args.short_names)}" for v, t in m.substitution)
            out.write(f"{m.class_name}<{subst}>\n")
            for r in m.residual:
                out.write(f"  residual: {r}\n")
            if not m.residual:
                ground = apply_raw_model(m, g.signature)
                for label, t in ground.fields:
                    out.write(f"  field {label}: {render_type(t, args.short_names)}\n")
                for label, ps, r in ground.methods:
                    ps = ", ".join(render_type(p, args.short_names) for p in ps)
                    out.write(f"  method {label}({ps}): {render_type(r, args.short_names)}\n")
    return 1 if any(m.residual for m, _ in models) else 0


def _cmd_check(args, out) -> int:
    units = _load(args.files)
    table = _table(units, args.stdlib)
    failed = False
    results = []
    for c, g in zip(_declared(units), _each(units, lambda c: generify(c, table))):
        problems = []
        originals = [NominalInterval.of(p) for p in c.type_params]
        oracle = oracle_for(table, originals)
        for iv in originals:
            r = check_interval(iv, oracle.is_subtype)
            if not r:
                problems.append(f"interval {iv.render()} invalid: {r.detail}")
        cyc = check_noncircularity(originals)
        if not cyc:
            problems.append(cyc.detail)
        synth_oracle = oracle_for(table, g.signature.params)
        for iv in g.signature.params:
            if iv.synthetic:
                r = check_interval(iv, synth_oracle.is_subtype)
                if not r:
                    problems.append(f"synthetic {iv.render()} invalid: {r.detail}")
        nest = check_single_nesting(g.signature)
        if not nest:
            problems.append(f"single nesting: {nest.detail}")
        failed |= bool(problems)
        results.append({"class": c.name, "ok": not problems, "problems": problems})
    checker = SubtypeChecker(table)
    for s, t in args.assert_subtype:
        holds = checker.is_subtype(_type(s, table), _type(t, table))
        failed |= not holds
        results.append({"assert": f"{s} <: {t}", "ok": holds, "problems": [] if holds else ["false"]})
    if args.json:
        out.write(_dump(results) + "\n")
    else:
        for r in results:
            name = r.get("class") or r["assert"]
            out.write(f"{name}: {'ok' if r['ok'] else 'FAILED'}\n")
            for prob in r["problems"]:
                out.write(f"  {prob}\n")
    return 1 if failed else 0


COMMANDS = {
    "parse": _cmd_parse,
    "sig": _cmd_sig,
    "generify": _cmd_generify,
    "subtype": _cmd_subtype,
    "chain": _cmd_chain,
    "graph": _cmd_graph,
    "erase": _cmd_erase,
    "check": _cmd_check,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except GenoopError as e:
        err.write(f"genoop: error: {e}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
