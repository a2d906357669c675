"""Point-line geometries read off two-point stabilizers, and graph analytics.

Points are the cosets 0..n-1.  For a chosen class of two-point stabilizers
the defining graph joins p and q when Stab(p, q) lies in the class; lines
are its cliques of largest size.  A line is uniform when all its point pairs
have the very same stabilizer subgroup; a geometry is elected when its
uniform lines still cover every edge of the defining graph and the result is
connected.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from .cosets import REVERSED_LETTER_ORDER, transversal
from .epicheck import evaluate
from .permgrp import commute, subgroups_equal

EXACT_SPECTRUM_MAX = 64


class EmptyGraph(ValueError):
    pass


@dataclass
class Geometry:
    n_points: int
    lines: tuple
    pair_class: list | None = None
    chosen_class: int | None = None
    rank_r: int | None = None

    def __post_init__(self):
        self.lines = tuple(sorted(tuple(sorted(l)) for l in self.lines))

    @property
    def n_lines(self):
        return len(self.lines)

    def lines_through(self):
        through = [[] for _ in range(self.n_points)]
        for i, line in enumerate(self.lines):
            for p in line:
                through[p].append(i)
        return through

    def line_sizes(self):
        return Counter(len(l) for l in self.lines)

    def point_degrees(self):
        return Counter(len(t) for t in self.lines_through())

    def notation(self):
        """Configuration symbol such as ``[12_6,24_3]_(4)``."""
        def part(count, hist):
            if len(hist) == 1:
                return f"{count}_{next(iter(hist))}"
            return f"{count}_{{{','.join(map(str, sorted(hist)))}}}"

        pts = part(self.n_points, self.point_degrees())
        lns = part(self.n_lines, self.line_sizes())
        body = pts if pts == lns else f"{pts},{lns}"
        tail = f"_({self.rank_r})" if self.rank_r is not None else ""
        return f"[{body}]{tail}"

    def to_json(self):
        return {"points": self.n_points, "lines": [[p + 1 for p in l] for l in self.lines]}

    def relabeled(self, perm):
        """Same geometry with point p renamed perm[p]."""
        lines = [[perm[p] for p in l] for l in self.lines]
        return Geometry(self.n_points, lines, rank_r=self.rank_r)


def geometry_from_json(doc):
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    n = doc["points"]
    if not isinstance(n, int) or n < 1:
        raise ValueError("'points' must be a positive integer")
    lines = []
    for l in doc["lines"]:
        if len(l) < 2 or len(set(l)) != len(l):
            raise ValueError(f"bad line {l}")
        for p in l:
            if not (isinstance(p, int) and 1 <= p <= n):
                raise ValueError(f"point {p} outside 1..{n}")
        lines.append([p - 1 for p in l])
    return Geometry(n, lines)


def load_geometry(path):
    with open(path, encoding="utf-8") as fh:
        return geometry_from_json(json.load(fh))


# -- construction ---------------------------------------------------------------

def maximal_cliques(graph):
    """Maximal cliques (Bron-Kerbosch with pivoting), sorted."""
    return sorted(tuple(sorted(c)) for c in nx.find_cliques(graph) if len(c) >= 2)


def maximum_cliques(graph):
    """The maximal cliques of largest size."""
    cliques = maximal_cliques(graph)
    top = max((len(c) for c in cliques), default=0)
    return [c for c in cliques if len(c) == top]


def build_geometry(group, report, chosen, rank=None):
    """Geometry whose lines are the largest cliques of the class graph."""
    n = group.degree
    pc = report.pair_class
    if not 0 <= chosen < len(report.classes):
        raise ValueError(f"no stabilizer class {chosen}")
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((p, q) for p in range(n) for q in range(p + 1, n) if pc[p][q] == chosen)
    if g.number_of_edges() == 0:
        raise EmptyGraph(f"no pair of distinct points in class {chosen}")
    return Geometry(n, maximum_cliques(g), pc, chosen, rank)


def geometries(group, report, rank=None):
    """One geometry per stabilizer class that joins some pair of points."""
    out = []
    for c in report.classes:
        try:
            out.append(build_geometry(group, report, c.id, rank))
        except EmptyGraph:
            continue
    return out


# -- election -------------------------------------------------------------------

class _FixedPoints:
    """Fixed point sets of two-point stabilizers, cached per pair."""

    def __init__(self, group):
        self.group = group
        self.cache = {}

    def __call__(self, p, q):
        key = (p, q)
        if key not in self.cache:
            stab = self.group.stabilizer(p, q)
            moved = set()
            for g in stab.gens:
                moved.update(i for i, x in enumerate(g) if i != x)
            self.cache[key] = frozenset(range(self.group.degree)) - moved
        return self.cache[key]


def uniform_lines(geom, group):
    """Indices of the lines whose point pairs all have equal stabilizers.

    Pairs on a line have isomorphic, hence equal-order, stabilizers, so they
    all coincide exactly when the stabilizer of the first pair fixes every
    point of the line.
    """
    fix = _FixedPoints(group)
    return [i for i, l in enumerate(geom.lines)
            if len(l) == 2 or set(l) <= fix(l[0], l[1])]


def elect(geom, group):
    """True iff on every line all pairs have equal two-point stabilizers."""
    return len(uniform_lines(geom, group)) == geom.n_lines


def is_connected(geom):
    return geom.n_points > 0 and nx.is_connected(collinearity_graph(geom))


def _edges(lines):
    return {(l[i], l[j]) for l in lines for i in range(len(l)) for j in range(i + 1, len(l))}


def elected_geometry(geom, group):
    """The geometry of uniform lines, or None when it is not elected.

    When some lines are not uniform, the uniform ones are kept if they still
    join every collinear pair (a sub-configuration on the same graph).  A
    disconnected result is a disjoint union of smaller pieces and is never
    elected.
    """
    keep = uniform_lines(geom, group)
    if not keep:
        return None
    lines = [geom.lines[i] for i in keep]
    if len(keep) < geom.n_lines and _edges(lines) != _edges(geom.lines):
        return None
    sub = Geometry(geom.n_points, lines, geom.pair_class, geom.chosen_class, geom.rank_r)
    return sub if is_connected(sub) else None


class _StabilizerIds:
    """Equal two-point stabilizers get equal ids.

    Equal subgroups have the same order and fixed points, so only
    stabilizers agreeing on both are compared explicitly.
    """

    def __init__(self, group):
        self.group = group
        self.ids = {}
        self.buckets = {}
        self.count = 0

    def __call__(self, p, q):
        key = (min(p, q), max(p, q))
        if key not in self.ids:
            stab = self.group.stabilizer(p, q)
            moved = {i for g in stab.gens for i, x in enumerate(g) if i != x}
            bucket = self.buckets.setdefault((stab.order(), frozenset(moved)), [])
            for other, k in bucket:
                if subgroups_equal(other, stab):
                    self.ids[key] = k
                    break
            else:
                self.ids[key] = self.count
                bucket.append((stab, self.count))
                self.count += 1
        return self.ids[key]


def verify_election(geom, group):
    """Slow explicit check: compare the stabilizer of every pair on each line."""
    ident = _StabilizerIds(group)
    for l in geom.lines:
        first = ident(l[0], l[1])
        for i, p in enumerate(l):
            for q in l[i + 1:]:
                if ident(p, q) != first:
                    return False
    return True


# -- contextuality parameter ------------------------------------------------------

@dataclass(frozen=True)
class KappaReport:
    defective_lines: int
    total_lines: int
    kappa: Fraction
    defective: tuple = ()

    def as_float(self):
        return float(self.kappa)


KAPPA_RULES = ("star", "pairwise")


def _line_ok(ok, line, rule):
    if rule == "pairwise":
        return all(ok(p, q) for j, p in enumerate(line) for q in line[j + 1:])
    # some point commutes with every other point of the line
    return any(all(ok(p, q) for q in line if q != p) for p in line)


def kappa(geom, reps, action, rule="star"):
    """Fraction of defective lines, as an exact rational.

    Each point p carries the image g_p of its representative word under
    a -> alpha, b -> beta.  Under the ``star`` rule a line is fine when one
    of its points commutes with all the others (so every line through the
    base coset, whose representative is e, is fine); under ``pairwise``
    all its points must commute.
    """
    if rule not in KAPPA_RULES:
        raise ValueError(f"unknown kappa rule {rule!r}")
    alpha, beta = action
    images = [evaluate(w, alpha, beta) for w in reps]
    memo = {}

    def ok(p, q):
        key = (p, q) if p < q else (q, p)
        if key not in memo:
            memo[key] = commute(images[p], images[q])
        return memo[key]

    bad = [i for i, l in enumerate(geom.lines) if not _line_ok(ok, l, rule)]
    total = geom.n_lines
    value = Fraction(len(bad), total) if total else Fraction(0)
    return KappaReport(len(bad), total, value, tuple(bad))


def kappa_sensitivity(geom, table, rule="star"):
    """kappa under the default representative rule and the reversed one."""
    action = (table.alpha, table.beta)
    return (kappa(geom, transversal(table), action, rule),
            kappa(geom, transversal(table, REVERSED_LETTER_ORDER), action, rule))


# -- graph analytics --------------------------------------------------------------

class SpectrumNotIntegral(ArithmeticError):
    pass


def collinearity_graph(geom):
    g = nx.Graph()
    g.add_nodes_from(range(geom.n_points))
    g.add_edges_from(_edges(geom.lines))
    return g


def complement(graph):
    return nx.complement(graph)


def _adjacency(graph):
    nodes = sorted(graph.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    a = np.zeros((len(nodes), len(nodes)), dtype=np.int64)
    for u, v in graph.edges():
        if u != v:
            a[idx[u], idx[v]] = a[idx[v], idx[u]] = 1
    return a


def _int_rank(rows):
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    prev = 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            f = m[i][col]
            row, prow = m[i], m[rank]
            m[i] = [(p * row[j] - f * prow[j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
    return rank


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple  # (value, multiplicity), decreasing values
    integral: bool
    exact: bool

    def as_dict(self):
        return {v: m for v, m in self.eigenvalues}


def spectrum(graph, exact_max=EXACT_SPECTRUM_MAX):
    """Adjacency spectrum with multiplicities.

    The eigenvalues come from a symmetric eigensolver.  When they round to
    integers and n <= exact_max, each multiplicity is confirmed exactly as
    the nullity of A - lambda I over the integers; the spectrum is then
    ``exact``.  Otherwise the float values are returned with ``integral``
    False (or True with ``exact`` False above the size limit).
    """
    a = _adjacency(graph)
    n = len(a)
    if n == 0:
        return Spectrum((), True, True)
    vals = np.linalg.eigvalsh(a.astype(float))
    rounded = np.rint(vals)
    if np.max(np.abs(vals - rounded)) > 1e-6:
        hist = Counter(round(float(v), 9) for v in vals)
        return Spectrum(tuple(sorted(hist.items(), reverse=True)), False, False)
    hist = Counter(int(v) for v in rounded)
    if n > exact_max:
        return Spectrum(tuple(sorted(hist.items(), reverse=True)), True, False)
    rows = a.tolist()
    for lam, mult in hist.items():
        shifted = [[x - (lam if i == j else 0) for j, x in enumerate(r)] for i, r in enumerate(rows)]
        if n - _int_rank(shifted) != mult:
            raise SpectrumNotIntegral("float eigenvalues disagree with exact nullities")
    return Spectrum(tuple(sorted(hist.items(), reverse=True)), True, True)


def trace_cycle_counts(graph):
    """Triangles and quadrilaterals from traces of adjacency powers."""
    a = _adjacency(graph).astype(object)
    a2 = a.dot(a)
    a3 = a2.dot(a)
    deg = [int(x) for x in a.sum(axis=1)]
    m = sum(deg) // 2
    tr3 = int(np.trace(a3))
    tr4 = int(sum(a2[i, j] * a2[j, i] for i in range(len(a)) for j in range(len(a))))
    tri = tr3 // 6
    quad = (tr4 - 2 * sum(d * d for d in deg) + 2 * m) // 8
    return tri, quad


def count_cycles(graph, max_len=7):
    """Number of simple cycles of each length 3..max_len.

    Each cycle is found once per direction from its smallest vertex by a
    depth-first walk restricted to larger vertices.
    """
    nodes = sorted(graph.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    adj = [sorted(idx[u] for u in graph.neighbors(v) if u != v) for v in nodes]
    counts = Counter()
    for s in range(len(nodes)):
        on_path = [False] * len(nodes)
        on_path[s] = True

        def walk(v, depth):
            for w in adj[v]:
                if w == s and depth >= 3:
                    counts[depth] += 1
                elif w > s and not on_path[w] and depth < max_len:
                    on_path[w] = True
                    walk(w, depth + 1)
                    on_path[w] = False

        walk(s, 1)
    return {k: counts[k] // 2 for k in range(3, max_len + 1)}
