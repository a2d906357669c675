"""Command line interface: ``contextua scan|analyze|catalog|veldkamp|export``.

Exit codes: 0 success, 2 partial result (a budget or cap was hit), 1 error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import driver
from .cosets import CosetTable, LimitExceeded, TableError
from .geometry import load_geometry
from .permgrp import IntransitiveInput, load_perm_pair
from .recognize import UnknownEntry, catalog_build, catalog_describe
from .veldkamp import DEFAULT_CAP, SEED_RULES, seed_hyperplanes, veldkamp_closure
from .words import PresentationError, WordSyntaxError, load_presentation, parse_words

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2


def _index_range(text):
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad index range {text!r}")
    return list(range(lo, hi + 1))


def _write(path, data: bytes):
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _options(args):
    return driver.ScanOptions(
        epi_bound=args.epi_bound, coset_limit=args.coset_limit,
        geometries=getattr(args, "geometries", "candidates"),
        all_records=getattr(args, "all_records", False),
        jobs=getattr(args, "jobs", 1))


def cmd_scan(args):
    pres, _ = load_presentation(args.presentation)
    opts = _options(args)
    if args.node_budget:
        opts.node_budget = args.node_budget

    def progress(row):
        d = row.to_json()
        print(f"index {d['index']}: all={d['all']} nontrivial={d['nontrivial']} "
              f"contextual={d['contextual']} elected={d['elected']}", file=sys.stderr)

    report = driver.scan(pres, args.index, opts, progress)
    data = driver.to_csv_bytes(report) if args.format == "csv" else driver.to_json_bytes(report)
    _write(args.out, data)
    return EXIT_PARTIAL if report.partial else EXIT_OK


def cmd_analyze(args):
    pres = None
    if args.presentation:
        pres, sub = load_presentation(args.presentation)
    opts = _options(args)
    if args.perm:
        with open(args.perm, encoding="utf-8") as fh:
            alpha, beta = load_perm_pair(json.load(fh))
        rec = driver.analyze(pres, perms=(alpha, beta), options=opts)
    elif args.table:
        with open(args.table, encoding="utf-8") as fh:
            rows = tuple(tuple(v - 1 for v in r) for r in json.load(fh))
        table = CosetTable(rows, pres)
        table.validate()
        rec = driver.analyze(pres, table=table, options=opts)
    else:
        if pres is None:
            raise ValueError("--subgroup needs --presentation")
        words = parse_words(args.subgroup.split(",")) if args.subgroup else sub
        if words is None:
            raise ValueError("no subgroup words given (use --subgroup or a 'subgroup' key)")
        rec = driver.analyze(pres, subgroup=words, options=opts)
    _write(args.out, driver.to_json_bytes(rec))
    return EXIT_OK


def cmd_catalog(args):
    if args.action == "list":
        for name, desc in catalog_describe():
            print(f"{name}\t{desc}")
        return EXIT_OK
    if not args.name:
        raise ValueError("catalog emit needs a name")
    params = tuple(int(p) for p in args.params.split(",")) if args.params else ()
    geom = catalog_build(args.name, params)
    _write(args.out, (json.dumps(geom.to_json()) + "\n").encode())
    return EXIT_OK


def cmd_veldkamp(args):
    geom = load_geometry(args.geometry)
    seeds = seed_hyperplanes(geom, args.seeds)
    res = veldkamp_closure(geom, seeds, args.cap)
    doc = res.to_json()
    doc["seeds"] = len(seeds)
    doc["seed_rule"] = args.seeds
    _write(args.out, (json.dumps(doc, indent=1) + "\n").encode())
    return EXIT_PARTIAL if res.truncated else EXIT_OK


def cmd_export(args):
    with open(args.record, encoding="utf-8") as fh:
        doc = json.load(fh)
    if args.format == "json":
        data = (json.dumps(doc, indent=1) + "\n").encode()
    elif args.format == "csv":
        if "rows" not in doc:
            raise ValueError("csv export needs a scan report")
        data = driver.to_csv_bytes(doc["rows"])
    else:
        recs = doc["records"] if "records" in doc else [doc]
        data = "".join(driver.record_dot(r) for r in recs).encode()
    _write(args.out, data)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="contextua",
                                description="Contextual geometries from finite-index subgroups.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--epi-bound", type=int, default=driver.DEFAULT_EPI_BOUND)
        sp.add_argument("--coset-limit", type=int, default=driver.DEFAULT_LIMIT)
        sp.add_argument("--out", "-o", default="-")

    s = sub.add_parser("scan", help="scan conjugacy classes of subgroups by index")
    s.add_argument("--presentation", required=True)
    s.add_argument("--index", required=True, type=_index_range, help="N or N..M")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--node-budget", type=int, default=0)
    s.add_argument("--geometries", choices=driver.GEOMETRY_SCOPES, default="candidates")
    s.add_argument("--all-records", action="store_true", help="keep records of rank < 3 too")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    common(s)
    s.set_defaults(func=cmd_scan)

    a = sub.add_parser("analyze", help="full record for one subgroup or action")
    a.add_argument("--presentation")
    g = a.add_mutually_exclusive_group()
    g.add_argument("--subgroup", help="comma-separated generator words")
    g.add_argument("--perm", help="JSON permutation pair")
    g.add_argument("--table", help="JSON coset table (1-based rows a, A, b, B)")
    common(a)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("catalog", help="list or emit reference geometries")
    c.add_argument("action", choices=("list", "emit"))
    c.add_argument("name", nargs="?")
    c.add_argument("--params", help="comma-separated integers for K, grid, T, OA, hamming")
    c.add_argument("--out", "-o", default="-")
    c.set_defaults(func=cmd_catalog)

    v = sub.add_parser("veldkamp", help="hyperplane classes of a geometry")
    v.add_argument("--geometry", required=True)
    v.add_argument("--cap", type=int, default=DEFAULT_CAP)
    v.add_argument("--seeds", choices=SEED_RULES, default="all")
    v.add_argument("--out", "-o", default="-")
    v.set_defaults(func=cmd_veldkamp)

    e = sub.add_parser("export", help="convert a record or report")
    e.add_argument("--record", required=True)
    e.add_argument("--format", choices=("json", "csv", "dot"), default="json")
    e.add_argument("--out", "-o", default="-")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, WordSyntaxError, PresentationError, TableError,
            IntransitiveInput, LimitExceeded, UnknownEntry) as e:
        print(f"contextua: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
