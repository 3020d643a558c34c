"""Command-line front end.

Exit codes: 0 every check holds, 1 a property is violated, 2 usage error,
3 input/output error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

from . import causal, dataset, suite
from . import relation as rel
from .errors import KCausalError, MalformedSpec
from .spacetimes import sample_grid, sample_random
from .topology import build_topology

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(path):
    try:
        return dataset.load(path)
    except OSError as exc:
        raise IOError(str(exc)) from None
    except (MalformedSpec, KeyError, ValueError) as exc:
        # an unreadable document is an input problem, not a flag problem
        raise IOError(f"{path}: {exc}") from None


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_sample(args):
    if (args.grid is None) == (args.n is None):
        raise UsageError("give exactly one of --grid MtxMx or --n N")
    if args.grid is not None:
        m = re.fullmatch(r"(\d+)x(\d+)", args.grid)
        if not m:
            raise UsageError(f"--grid expects MtxMx, got {args.grid!r}")
        es = sample_grid(args.model, int(m.group(1)), int(m.group(2)), args.jitter or 0.0, args.seed)
    else:
        if args.seed is None:
            raise UsageError("--n needs an explicit --seed")
        if args.jitter:
            raise UsageError("--jitter applies to grids only")
        es = sample_random(args.model, args.n, args.seed)
    dataset.save(dataset.Dataset.from_event_set(es), args.out)
    print(f"{len(es)} events -> {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_relations(args):
    ds = _load(args.inp)
    es = ds.event_set()
    T = build_topology(es, args.radius)
    I = causal.chronology(es.model, es)
    K, iterations = causal.k_plus(I, T)
    ds.radius = T.radius
    ds.relations = {"I": I, "K": K}
    if args.oracles:
        for kind in sorted(es.model.oracles):
            ds.relations[f"{kind}_oracle"] = es.relation(kind)
    ds.meta = {**ds.meta, "iterations": iterations, "discrete_topology": T.is_discrete}
    dataset.save(ds, args.out)
    print(f"K computed on {len(es)} events, {iterations} alternation(s) -> {args.out}", file=sys.stderr)
    return EXIT_OK


def _emit_reports(reports, fmt, out):
    if fmt == "json":
        text = json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "holds", "witness", "margin", "seconds"])
        for r in reports:
            w.writerow([r.name, r.holds, json.dumps(r.to_dict()["witness"]),
                        r.params.get("margin", ""), r.timing.get("seconds", "")])
        text = buf.getvalue()
    _write(out, text)


def cmd_check(args):
    names = [s.strip() for s in args.check.split(",") if s.strip()]
    unknown = [s for s in names if s not in suite.CHECKS]
    if not names or unknown:
        raise UsageError(f"unknown check(s) {unknown}; known: {', '.join(suite.CHECKS)}")
    C = _load(args.inp).structure()
    reports = [suite.run_check(name, C, args.margin) for name in names]
    for r in reports:
        print(str(r), file=sys.stderr)
    _emit_reports(reports, args.format, args.out)
    return EXIT_OK if all(r.holds for r in reports) else EXIT_VIOLATION


def cmd_compare(args):
    for fam in (args.left, args.right):
        if fam not in suite.FAMILIES:
            raise UsageError(f"unknown family {fam!r}; known: {', '.join(suite.FAMILIES)}")
    C = _load(args.inp).structure()
    margin = C.default_margin() if args.margin is None else args.margin
    r = suite.compare_families(C, args.left, args.right, C.margin_mask(margin), margin)
    print(str(r), file=sys.stderr)
    _emit_reports([r], args.format, args.out)
    return EXIT_OK if r.holds else EXIT_VIOLATION


def cmd_export(args):
    ds = _load(args.inp)
    what = args.what
    if what.startswith("relation:"):
        name = what.split(":", 1)[1]
        if name not in ds.relations:
            raise UsageError(f"dataset has no relation {name!r}; has {sorted(ds.relations)}")
        R, title = ds.relations[name], name
    elif what == "hasse" or what.startswith("hasse:"):
        name = what.split(":", 1)[1] if ":" in what else "K"
        if name not in ds.relations:
            raise UsageError(f"dataset has no relation {name!r}")
        R = ds.relations[name]
        if not rel.is_antisymmetric(R):
            raise UsageError(f"relation {name} is not antisymmetric; no Hasse diagram")
        R, title = dataset.hasse(R), f"hasse_{name}"
    else:
        raise UsageError(f"--what expects relation:NAME or hasse, got {what!r}")
    _write(args.out, dataset.to_dot(R, title))
    return EXIT_OK


def build_parser():
    p = _Parser(prog="kcausal", description="K+ causal relations on sampled spacetimes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="sample events from a model")
    s.add_argument("--model", required=True, help="e.g. minkowski, cylinder:period=1, minus-points:p=1/0")
    s.add_argument("--grid", help="lattice size MtxMx")
    s.add_argument("--n", type=int, help="number of random events")
    s.add_argument("--seed", type=int)
    s.add_argument("--jitter", type=float)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("relations", help="compute the topology, I and K")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--radius", type=float)
    s.add_argument("--oracles", action="store_true", help="also store the analytic I/J/K matrices")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_relations)

    s = sub.add_parser("check", help="run named property checks")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--check", required=True, help="comma-separated names: " + ",".join(suite.CHECKS))
    s.add_argument("--margin", type=float)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("compare", help="compare two generated topologies")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--margin", type=float)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("export", help="export a relation as a DOT graph")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--what", required=True, help="relation:NAME or hasse[:NAME]")
    s.add_argument("--format", choices=("dot",), default="dot")
    s.add_argument("--out")
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"kcausal: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"kcausal: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (KCausalError, ValueError) as exc:
        print(f"kcausal: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
