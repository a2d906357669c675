"""End-to-end pipeline over conjugacy classes of finite-index subgroups.

For each class: rank and two-point stabilizer classes (first axiom), normal
closure (second axiom), uniqueness of the epimorphism onto P, then the
geometries, their election, kappa, catalog names and modular invariants.
During a scan, records with rank below 3 are short-circuited (they cannot
pass the first axiom), and s is only bounded from suborbit lengths, without
computing |P|, when the bounds already settle the first axiom.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ._kernels import orbital_counts
from .cosets import (DEFAULT_LIMIT, REVERSED_LETTER_ORDER, CosetTable, table_from_perms,
                     todd_coxeter, transversal)
from .epicheck import DEFAULT_EPI_BOUND, epi_classes, satisfies
from .geometry import (collinearity_graph, elected_geometry, geometries, geometry_from_json, kappa,
                       spectrum, trace_cycle_counts, verify_election)
from .lowindex import DEFAULT_NODE_BUDGET, NodeBudgetExceeded, canonical_form, iter_flat_tables
from .modular import NotModularAction, dessin_genus, modular_invariants
from .permgrp import (ISO_ORDER_BOUND, IntransitiveInput, OrderTooLarge, PermGroup,
                      cycles, format_perm, is_identity, orbitals, parse_cycles,
                      order_at_most, power, s_bounds, two_point_classes,
                      normal_closure_quotient)
from .recognize import fingerprint, match_catalog
from .words import Presentation, parse_word, render

log = logging.getLogger(__name__)

YES, NO, UNDETERMINED = "Yes", "No", "Undetermined"
GEOMETRY_SCOPES = ("candidates", "nontrivial", "none")


@dataclass
class ScanOptions:
    epi_bound: int = DEFAULT_EPI_BOUND
    iso_bound: int = ISO_ORDER_BOUND
    coset_limit: int = DEFAULT_LIMIT
    node_budget: int = DEFAULT_NODE_BUDGET
    kappa_rule: str = "star"
    geometries: str = "candidates"
    all_records: bool = False
    jobs: int = 1


@dataclass
class GeometryReport:
    stab_class: int
    geometry: object
    elected: bool
    uniform: bool
    elected_geometry: object = None
    name: str | None = None
    kappa: dict = field(default_factory=dict)
    verified: bool | None = None

    @property
    def shown(self):
        return self.elected_geometry if self.elected_geometry is not None else self.geometry

    @property
    def type_name(self):
        return self.name or self.shown.notation()

    def to_json(self):
        g = self.shown
        fp = fingerprint(g)
        return {
            "stab_class": self.stab_class,
            "notation": g.notation(),
            "full_notation": self.geometry.notation(),
            "elected": self.elected,
            "uniform": self.uniform,
            "verified": self.verified,
            "name": self.name,
            "fingerprint": {
                "points": fp.n_points, "lines": fp.n_lines,
                "line_sizes": [list(x) for x in fp.line_sizes],
                "lines_per_point": [list(x) for x in fp.lines_per_point],
                "degrees": [list(x) for x in fp.degrees],
                "rank": fp.rank_r, "triangles": fp.triangles,
                "spectrum": [list(x) for x in fp.spectrum] if fp.spectrum else None,
            },
            "kappa": {k: {"defective": v.defective_lines, "lines": v.total_lines,
                          "value": f"{v.kappa.numerator}/{v.kappa.denominator}"}
                      for k, v in self.kappa.items()},
            "lines": g.to_json()["lines"],
        }


@dataclass
class ScanRecord:
    presentation: str
    index: int
    table: tuple
    alpha: tuple
    beta: tuple
    r: int
    order: int | None = None
    s: int | None = None
    s_upper: int | None = None
    s_distinct: int | None = None
    axiom1: bool | None = False
    axiom2: str = UNDETERMINED
    quotient: int | None = None
    epi_classes: int | None = None
    candidate: bool = False
    candidate_undetermined: bool = False
    geometries: list = field(default_factory=list)
    modular: object = None
    dessin_genus: int | None = None
    reps: tuple = ()
    notes: list = field(default_factory=list)

    @property
    def elected(self):
        return [g for g in self.geometries if g.elected]

    def to_json(self):
        return {
            "presentation": self.presentation,
            "index": self.index,
            "table": [[v + 1 for v in row] for row in self.table],
            "alpha": format_perm(self.alpha),
            "beta": format_perm(self.beta),
            "order": self.order,
            "r": self.r,
            "s": self.s,
            "s_upper": self.s_upper,
            "s_distinct": self.s_distinct,
            "axiom1": self.axiom1,
            "axiom2": self.axiom2,
            "quotient": self.quotient,
            "epi_classes": self.epi_classes,
            "contextual_candidate": self.candidate,
            "candidate_undetermined": self.candidate_undetermined,
            "geometries": [g.to_json() for g in self.geometries],
            "modular": self.modular.to_json() if self.modular else None,
            "dessin_genus": self.dessin_genus,
            "representatives": [render(w) for w in self.reps],
            "notes": list(self.notes),
        }


@dataclass
class Row:
    index: int
    all: int = 0
    nontrivial: int = 0
    contextual: int = 0
    elected: int = 0
    types: list = field(default_factory=list)
    undetermined: int = 0
    partial: bool = False

    def add(self, rec):
        self.all += 1
        self.nontrivial += bool(rec.axiom1)
        self.contextual += rec.candidate
        self.undetermined += rec.candidate_undetermined
        if rec.candidate and rec.elected:
            self.elected += 1
            for g in rec.elected:
                if g.type_name not in self.types:
                    self.types.append(g.type_name)

    def to_json(self):
        return {"index": self.index, "all": self.all, "nontrivial": self.nontrivial,
                "contextual": self.contextual, "elected": self.elected,
                "types": sorted(self.types), "undetermined": self.undetermined,
                "partial": self.partial}


@dataclass
class ScanReport:
    presentation: str
    rows: list
    records: list

    @property
    def partial(self):
        return any(r.partial for r in self.rows)

    def row(self, index):
        return next(r for r in self.rows if r.index == index)

    def to_json(self):
        return {"presentation": self.presentation,
                "rows": [r.to_json() for r in self.rows],
                "records": [r.to_json() for r in self.records]}


# -- per-record pipeline ----------------------------------------------------------

def _modular(rec, alpha, beta):
    if not (is_identity(power(alpha, 2)) and is_identity(power(beta, 3))):
        rec.notes.append("modular invariants skipped: alpha^2 or beta^3 is not the identity")
        return
    try:
        rec.modular = modular_invariants(alpha, beta)
    except NotModularAction as e:
        rec.notes.append(f"modular invariants skipped: {e}")


def _geometry_reports(rec, group, report, table, opts):
    reps = transversal(table)
    rev = transversal(table, REVERSED_LETTER_ORDER)
    action = (table.alpha, table.beta)
    out = []
    for geom in geometries(group, report, rec.r):
        sub = elected_geometry(geom, group)
        uniform = sub is not None
        gr = GeometryReport(geom.chosen_class, geom, rec.candidate and uniform, uniform, sub)
        shown = gr.shown
        gr.name = match_catalog(shown)
        gr.kappa = {
            "star": kappa(shown, reps, action, "star"),
            "pairwise": kappa(shown, reps, action, "pairwise"),
            "star_reversed": kappa(shown, rev, action, "star"),
        }
        if gr.elected:
            gr.verified = verify_election(shown, group)
            if not gr.verified:
                raise AssertionError("elected geometry failed the explicit stabilizer check")
        out.append(gr)
    return out


def analyze_table(pres, table, opts=None, short_circuit=False, r=None, reps=None):
    """Run the full pipeline on one transitive coset table."""
    opts = opts or ScanOptions()
    n = table.n
    alpha, beta = table.alpha, table.beta
    rec = ScanRecord(pres.label if pres else "", n, tuple(table.rows), alpha, beta, r or 0)
    rec.reps = tuple(reps if reps is not None else transversal(table))
    _modular(rec, alpha, beta)
    if rec.modular is not None or not short_circuit:
        try:
            rec.dessin_genus = dessin_genus(alpha, beta)
        except AssertionError:
            pass
    orb = None
    if r is None:
        orb = orbitals([alpha, beta], n)
        rec.r = len({v for row in orb for v in row})
    if rec.r < 3 and short_circuit:
        rec.axiom1 = False
        return rec
    if orb is None:
        orb = orbitals([alpha, beta], n)
    group = PermGroup([alpha, beta], n)
    if not group.is_transitive():
        raise IntransitiveInput("action is not transitive")
    rec.quotient = normal_closure_quotient(group, orb)
    rec.axiom2 = YES if rec.quotient == 1 else NO
    report = None
    if short_circuit and opts.geometries != "nontrivial":
        # decide what can be decided without |P| or isomorphism tests
        lo, hi = s_bounds(orb)
        if lo >= 3 or hi < 3:
            rec.s, rec.s_upper = lo, hi
            rec.axiom1 = rec.r >= 3 and lo >= 3
            bounded = "s bounded by suborbit lengths only"
            if not rec.axiom1 or rec.axiom2 != YES:
                if lo != hi:
                    rec.notes.append(bounded)
                return rec
            if order_at_most(group.gens, n, opts.epi_bound) is None:
                rec.candidate_undetermined = True
                if lo != hi:
                    rec.notes.append(bounded)
                rec.notes.append(f"epimorphism classes undetermined: |P| > {opts.epi_bound}")
                return rec
    rec.order = group.order()
    report = two_point_classes(group, opts.iso_bound, orb)
    rec.s, rec.s_upper, rec.s_distinct = report.s, report.s_upper, report.s_distinct
    if not report.axiom1_decided:
        rec.axiom1 = None
        rec.notes.append("first axiom undetermined: isomorphism test over the order bound")
    else:
        rec.axiom1 = rec.r >= 3 and report.s >= 3
    if rec.axiom1 and rec.axiom2 == YES:
        try:
            rec.epi_classes = epi_classes(pres or Presentation(()), group,
                                          bound=opts.epi_bound).class_count
        except OrderTooLarge:
            rec.candidate_undetermined = True
            rec.notes.append(f"epimorphism classes undetermined: |P| > {opts.epi_bound}")
        rec.candidate = rec.epi_classes == 1
    want = (opts.geometries == "nontrivial" and rec.axiom1) or rec.candidate
    if not short_circuit or (want and opts.geometries != "none"):
        rec.geometries = _geometry_reports(rec, group, report, table, opts)
    return rec


def _table_of(flat, n, pres):
    rows = tuple(tuple(int(v) for v in flat[4 * i:4 * i + 4]) for i in range(n))
    return CosetTable(rows, pres)


def _scan_chunk(args):
    pres, n, part, ranks, opts = args
    out = []
    for flat, r in zip(part, ranks):
        r = int(r)
        if r < 3 and not opts.all_records:
            out.append(None)
            continue
        out.append(analyze_table(pres, _table_of(flat, n, pres), opts, short_circuit=True, r=r))
    return out


def scan(pres: Presentation, indices, options=None, progress=None):
    """Scan every conjugacy class of subgroups at each index in ``indices``.

    Records are kept for classes of rank >= 3 (all classes with
    ``all_records``); rows count every class.  A node budget overrun marks
    the row partial and keeps what was found.
    """
    opts = options or ScanOptions()
    rows, records = [], []
    for n in indices:
        row = Row(n)
        rows.append(row)
        chunks = []
        try:
            for part in iter_flat_tables(pres, n, opts.node_budget):
                chunks.append((pres, n, part, orbital_counts(part, n), opts))
        except NodeBudgetExceeded:
            row.partial = True
            log.warning("index %d: node budget exhausted, report is partial", n)
        if opts.jobs > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(max_workers=opts.jobs) as ex:
                results = list(ex.map(_scan_chunk, chunks))
        else:
            results = [_scan_chunk(c) for c in chunks]
        for (_, _, part, ranks, _), recs in zip(chunks, results):
            for rec in recs:
                if rec is None:
                    row.all += 1
                    continue
                row.add(rec)
                records.append(rec)
        if progress:
            progress(row)
    return ScanReport(pres.label, rows, records)


def analyze(pres=None, subgroup=None, table=None, perms=None, options=None):
    """Full record for one of: presentation + subgroup words, a coset table,
    or a permutation pair (labels kept; representatives from its Schreier tree)."""
    opts = options or ScanOptions()
    given = sum(x is not None for x in (subgroup, table, perms))
    if given != 1:
        raise ValueError("give exactly one of subgroup words, coset table, permutation pair")
    if subgroup is not None:
        if pres is None:
            raise ValueError("subgroup words need a presentation")
        table = todd_coxeter(pres, subgroup, limit=opts.coset_limit)
    elif perms is not None:
        alpha, beta = perms
        table = table_from_perms(alpha, beta, pres, standardize=False)
        if pres is not None and not satisfies(pres.relators, alpha, beta):
            raise ValueError("the permutations do not satisfy the relators")
    n = table.n
    if not PermGroup([table.alpha, table.beta], n).is_transitive():
        raise IntransitiveInput("action is not transitive")
    return analyze_table(pres, table, opts)


def canonical_key(rec):
    return canonical_form(CosetTable(rec.table, None)).encoding()


# -- export -------------------------------------------------------------------------

CSV_HEADER = ["index", "all", "nontrivial", "contextual", "elected", "types"]


def to_json_bytes(obj):
    doc = obj.to_json() if hasattr(obj, "to_json") else obj
    return (json.dumps(doc, indent=1, sort_keys=False) + "\n").encode()


def to_csv_bytes(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    rows = report.rows if isinstance(report, ScanReport) else [Row(**r) if isinstance(r, dict) else r
                                                               for r in report]
    for r in rows:
        d = r.to_json()
        w.writerow([d["index"], d["all"], d["nontrivial"], d["contextual"], d["elected"],
                    ";".join(d["types"])])
    return buf.getvalue().encode()


def dessin_dot(alpha, beta, reps=None):
    """Bipartite map: black nodes are cycles of alpha, white ones cycles of
    beta, and point i is an edge between the cycles containing it."""
    n = len(alpha)
    lines = ["graph dessin {", "  node [shape=circle, label=\"\"];"]
    black, white = {}, {}
    for k, cyc in enumerate(cycles(alpha, singletons=True)):
        lines.append(f"  b{k} [style=filled, fillcolor=black];")
        black.update((p, k) for p in cyc)
    for k, cyc in enumerate(cycles(beta, singletons=True)):
        lines.append(f"  w{k} [style=filled, fillcolor=white];")
        white.update((p, k) for p in cyc)
    for p in range(n):
        label = str(p + 1)
        if reps is not None:
            label += " " + (render(reps[p]) or "e")
        lines.append(f"  b{black[p]} -- w{white[p]} [label=\"{label}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def geometry_dot(geom, name="geometry"):
    """Points as circles; each line is a box joined to its points."""
    lines = [f"graph \"{name}\" {{"]
    for p in range(geom.n_points):
        lines.append(f"  p{p + 1} [label=\"{p + 1}\"];")
    for i, line in enumerate(geom.lines):
        lines.append(f"  l{i + 1} [shape=point];")
        for p in line:
            lines.append(f"  l{i + 1} -- p{p + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def record_dot(doc):
    """DOT for a record JSON document: the dessin and each geometry."""
    n = doc["index"]
    alpha = parse_cycles(doc["alpha"], n)
    beta = parse_cycles(doc["beta"], n)
    reps = doc.get("representatives")
    out = [dessin_dot(alpha, beta, [_parse_rep(w) for w in reps] if reps else None)]
    for k, g in enumerate(doc.get("geometries", [])):
        geom = geometry_from_json({"points": n, "lines": g["lines"]})
        out.append(geometry_dot(geom, f"geometry_{k + 1}"))
    return "".join(out)


def _parse_rep(text):
    return () if text in ("", "e") else parse_word(text)


def graph_summary(geom):
    """Spectrum and short-cycle counts of the collinearity graph."""
    g = collinearity_graph(geom)
    tri, quad = trace_cycle_counts(g)
    return {"spectrum": spectrum(g).as_dict(), "triangles": tri, "quadrilaterals": quad}


__all__ = ["ScanOptions", "ScanRecord", "ScanReport", "GeometryReport", "Row", "scan",
           "analyze", "analyze_table", "to_json_bytes", "to_csv_bytes", "dessin_dot",
           "geometry_dot", "record_dot", "graph_summary", "YES", "NO", "UNDETERMINED",
           ]
