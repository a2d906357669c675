"""Fingerprints of point-line geometries and a catalog of named ones.

Two geometries are isomorphic when their point-line incidence graphs are
isomorphic by a map sending points to points.  Cheap invariants are compared
first; the exact test runs networkx's VF2 matcher on the incidence graphs.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .geometry import Geometry, collinearity_graph, complement, spectrum, trace_cycle_counts

ISO_POINT_BOUND = 64


class TooLarge(ValueError):
    pass


class UnknownEntry(KeyError):
    pass


@dataclass(frozen=True)
class Fingerprint:
    n_points: int
    n_lines: int
    line_sizes: tuple
    lines_per_point: tuple
    degrees: tuple
    rank_r: int | None
    triangles: int
    spectrum: tuple | None

    def structural(self):
        """All fields except the rank, which comes from the group."""
        return (self.n_points, self.n_lines, self.line_sizes, self.lines_per_point,
                self.degrees, self.triangles, self.spectrum)


def fingerprint(geom: Geometry) -> Fingerprint:
    g = collinearity_graph(geom)
    spec = spectrum(g)
    tri, _ = trace_cycle_counts(g)
    return Fingerprint(
        geom.n_points, geom.n_lines,
        tuple(sorted(geom.line_sizes().items())),
        tuple(sorted(geom.point_degrees().items())),
        tuple(sorted(Counter(d for _, d in g.degree()).items())),
        geom.rank_r, tri,
        spec.eigenvalues if spec.integral else None)


def incidence_graph(geom):
    g = nx.Graph()
    g.add_nodes_from((("p", p) for p in range(geom.n_points)), kind=0)
    g.add_nodes_from((("l", i) for i in range(geom.n_lines)), kind=1)
    for i, line in enumerate(geom.lines):
        g.add_edges_from((("l", i), ("p", p)) for p in line)
    return g


def geometry_isomorphic(g1, g2, bound=ISO_POINT_BOUND):
    if max(g1.n_points, g2.n_points) > bound:
        raise TooLarge(f"isomorphism test limited to {bound} points")
    if fingerprint(g1).structural() != fingerprint(g2).structural():
        return False
    gm = GraphMatcher(incidence_graph(g1), incidence_graph(g2),
                      node_match=lambda a, b: a["kind"] == b["kind"])
    return gm.is_isomorphic()


# -- catalog ------------------------------------------------------------------------

def multipartite(*parts):
    """K(n1,...,nk): lines are the transversals (one point from each part)."""
    if len(parts) < 2 or min(parts) < 1:
        raise ValueError("need at least two nonempty parts")
    start = list(itertools.accumulate((0,) + parts))
    blocks = [range(start[i], start[i + 1]) for i in range(len(parts))]
    return Geometry(start[-1], list(itertools.product(*blocks)))


def grid(m, k):
    """m x k grid: rows and columns are the lines."""
    pts = lambda i, j: i * k + j
    lines = [[pts(i, j) for j in range(k)] for i in range(m)]
    lines += [[pts(i, j) for i in range(m)] for j in range(k)]
    return Geometry(m * k, lines)


def pappus():
    """Affine plane of order 3 without one parallel class."""
    pt = lambda x, y: 3 * x + y
    lines = []
    for slope in (0, 1, 2):
        for c in range(3):
            lines.append([pt(x, (slope * x + c) % 3) for x in range(3)])
    return Geometry(9, lines)


def pentagram():
    """Pairs from a 5-set; line i holds the four pairs containing i."""
    pairs = list(itertools.combinations(range(5), 2))
    return Geometry(10, [[k for k, p in enumerate(pairs) if i in p] for i in range(5)])


def gq22():
    """Duads of a 6-set as points, synthemes (three disjoint duads) as lines."""
    duads = list(itertools.combinations(range(6), 2))
    idx = {d: k for k, d in enumerate(duads)}
    lines = set()
    for a, b, c in itertools.combinations(duads, 3):
        if len(set(a + b + c)) == 6:
            lines.add(tuple(sorted((idx[a], idx[b], idx[c]))))
    return Geometry(15, sorted(lines))


def shrikhande():
    """Cayley graph on Z4 x Z4 with connection set +-(1,0), +-(0,1), +-(1,1);
    its triangles are the lines."""
    pt = lambda x, y: 4 * (x % 4) + (y % 4)
    conn = [(1, 0), (0, 1), (1, 1), (3, 0), (0, 3), (3, 3)]
    g = nx.Graph()
    for x in range(4):
        for y in range(4):
            for dx, dy in conn:
                g.add_edge(pt(x, y), pt(x + dx, y + dy))
    tris = {tuple(sorted(c)) for c in nx.enumerate_all_cliques(g) if len(c) == 3}
    return Geometry(16, sorted(tris))


def fano():
    return [(i % 7, (i + 1) % 7, (i + 3) % 7) for i in range(7)]


def gh21():
    """Flags of the Fano plane; each point and each line of the plane gives a
    line made of the three flags through it."""
    flags = [(p, l) for l, line in enumerate(fano()) for p in line]
    lines = [[k for k, (p, _) in enumerate(flags) if p == q] for q in range(7)]
    lines += [[k for k, (_, l) in enumerate(flags) if l == m] for m in range(7)]
    return Geometry(21, lines)


def hamming_grid(dim=3, q=3):
    """q^dim points; lines are the axis-parallel lines."""
    pts = list(itertools.product(range(q), repeat=dim))
    idx = {p: k for k, p in enumerate(pts)}
    lines = set()
    for p in pts:
        for axis in range(dim):
            line = tuple(sorted(idx[p[:axis] + (v,) + p[axis + 1:]] for v in range(q)))
            lines.add(line)
    return Geometry(len(pts), sorted(lines))


def triangular(m=6):
    """T(m): pairs of an m-set; lines are the pairs through a fixed element."""
    pairs = list(itertools.combinations(range(m), 2))
    return Geometry(len(pairs), [[k for k, p in enumerate(pairs) if i in p] for i in range(m)])


def orthogonal_array(q=5, k=3):
    """Net of order q with k parallel classes of the affine plane over Z_q
    (q prime): horizontals, verticals, then slopes 1, 2, ..."""
    if k < 1 or k > q + 1:
        raise ValueError("need 1 <= k <= q + 1")
    if any(q % d == 0 for d in range(2, q)):
        raise ValueError("q must be prime")
    pt = lambda x, y: q * x + y
    classes = [[[pt(x, c) for x in range(q)] for c in range(q)],
               [[pt(c, y) for y in range(q)] for c in range(q)]]
    for slope in range(1, q):
        classes.append([[pt(x, (slope * x + c) % q) for x in range(q)] for c in range(q)])
    return Geometry(q * q, [l for cls in classes[:k] for l in cls])


_BUILDERS = {
    "Mermin square": (lambda: grid(3, 3), "3 x 3 grid"),
    "Mermin pentagram": (pentagram, "10 points, 5 lines of 4"),
    "Pappus": (pappus, "9 points, 9 lines of 3"),
    "K(3,3)": (lambda: multipartite(3, 3), "complete bipartite, 9 lines of 2"),
    "K(3,3,3)": (lambda: multipartite(3, 3, 3), "complete tripartite, 27 triangles"),
    "GQ(2,2)": (gq22, "duad-syntheme model, 15 points, 15 lines"),
    "Shrikhande": (shrikhande, "16 points, 32 triangles"),
    "GH(2,1)": (gh21, "flags of the Fano plane, 21 points, 14 lines"),
    "3x3x3 grid": (hamming_grid, "27 points, 27 lines"),
    "T(6)": (triangular, "15 points, 6 lines of 5"),
    "OA(5,3)": (orthogonal_array, "25 points, 15 lines of 5"),
}

_PARAMETRIC = {
    "K": multipartite,
    "grid": grid,
    "T": triangular,
    "OA": orthogonal_array,
    "hamming": hamming_grid,
}


def catalog_names():
    return list(_BUILDERS)


def catalog_describe():
    return [(name, desc) for name, (_, desc) in _BUILDERS.items()]


def catalog_build(name, params=()):
    """Reference geometry for a fixed entry, or a parametric family
    (``K``, ``grid``, ``T``, ``OA``, ``hamming``) with integer ``params``."""
    if name in _BUILDERS and not params:
        return _BUILDERS[name][0]()
    if name in _PARAMETRIC:
        return _PARAMETRIC[name](*params)
    raise UnknownEntry(name)


_FP_CACHE = {}


def _reference(name):
    if name not in _FP_CACHE:
        geom = catalog_build(name)
        _FP_CACHE[name] = (geom, fingerprint(geom).structural())
    return _FP_CACHE[name]


def multipartite_parts(geom):
    """Part sizes if the geometry is K(n1,...,nk) with transversal lines."""
    comp = complement(collinearity_graph(geom))
    parts = []
    for cc in nx.connected_components(comp):
        k = len(cc)
        if comp.subgraph(cc).number_of_edges() != k * (k - 1) // 2:
            return None
        parts.append(k)
    if len(parts) < 2:
        return None
    parts.sort()
    if geom.n_lines != _prod(parts) or any(len(l) != len(parts) for l in geom.lines):
        return None
    return tuple(parts)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def match_catalog(geom, bound=ISO_POINT_BOUND):
    """Name of the first catalog entry isomorphic to ``geom``, else a
    ``K(...)`` label from the multipartite detector, else None."""
    if geom.n_points <= bound:
        fp = fingerprint(geom).structural()
        for name in _BUILDERS:
            ref, ref_fp = _reference(name)
            if ref_fp == fp and geometry_isomorphic(ref, geom, bound):
                return name
    parts = multipartite_parts(geom)
    if parts:
        return "K(" + ",".join(map(str, parts)) + ")"
    return None
