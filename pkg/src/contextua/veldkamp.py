"""Hyperplanes of a point-line geometry and their Veldkamp sums.

Point sets are Python ints used as bitsets (bit p is point p).  A hyperplane
is a proper nonempty subset meeting every line in one point or containing it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import networkx as nx

from .geometry import collinearity_graph

DEFAULT_CAP = 1 << 20


def to_mask(points):
    if isinstance(points, int):
        return points
    m = 0
    for p in points:
        m |= 1 << p
    return m


def to_points(mask):
    out = []
    p = 0
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return out


def _line_masks(geom):
    return [to_mask(l) for l in geom.lines]


def universe(geom):
    return (1 << geom.n_points) - 1


def is_hyperplane(geom, H, _lines=None):
    h = to_mask(H)
    if h == 0 or h == universe(geom):
        raise ValueError("a hyperplane must be a proper nonempty subset")
    for lm in _lines if _lines is not None else _line_masks(geom):
        c = (lm & h).bit_count()
        if c != 1 and lm & h != lm:
            return False
    return True


def vsum(H, H2, univ):
    """Complement of the symmetric difference."""
    return univ & ~(to_mask(H) ^ to_mask(H2))


SEED_RULES = ("distance", "cocycle", "all")


def seed_hyperplanes(geom, rule="distance"):
    """Seed hyperplanes.

    ``distance``: for each point, its perp set and its perp set plus the
    points at maximal distance, kept when they pass the predicate.
    ``cocycle``: a GF(2) basis of hyperplane complements; only defined when
    every line has three points.  ``all`` is the union, distance seeds first.
    """
    if rule not in SEED_RULES:
        raise ValueError(f"unknown seed rule {rule!r}")
    out = [] if rule == "cocycle" else _distance_seeds(geom)
    if rule != "distance" and all(len(l) == 3 for l in geom.lines):
        have = set(out)
        out += [h for h in cocycle_seeds(geom) if h not in have]
    return out


def cocycle_seeds(geom):
    """Complements of a basis of {c : c meets every line evenly}.

    With three points per line these complements are exactly the hyperplanes,
    and their Veldkamp sums are the sums of the vectors c.
    """
    n = geom.n_points
    pivots = {}
    for row in _line_masks(geom):
        for col, prow in pivots.items():
            if row >> col & 1:
                row ^= prow
        if row:
            col = (row & -row).bit_length() - 1
            for c2 in list(pivots):
                if pivots[c2] >> col & 1:
                    pivots[c2] ^= row
            pivots[col] = row
    univ = universe(geom)
    out = []
    for free in range(n):
        if free in pivots:
            continue
        c = 1 << free
        for col, prow in pivots.items():
            if prow >> free & 1:
                c |= 1 << col
        out.append(univ & ~c)
    return out


def _distance_seeds(geom):
    g = collinearity_graph(geom)
    if geom.n_points and not nx.is_connected(g):
        raise ValueError("collinearity graph is disconnected")
    lines = _line_masks(geom)
    univ = universe(geom)
    seen = set()
    out = []
    for v in range(geom.n_points):
        dist = nx.single_source_shortest_path_length(g, v)
        ecc = max(dist.values())
        perp = to_mask([v, *g.neighbors(v)])
        far = perp | to_mask(u for u, d in dist.items() if d == ecc)
        for cand in (perp, far):
            if cand in seen or cand == 0 or cand == univ:
                continue
            seen.add(cand)
            if is_hyperplane(geom, cand, lines):
                out.append(cand)
    return out


def hyperplane_signature(geom, H):
    """(|H|, (n0, ..., nd)): n_i points of H lie on exactly i lines inside H."""
    h = to_mask(H)
    inside = [to_mask(l) for l in geom.lines if to_mask(l) & h == to_mask(l)]
    d = max(geom.point_degrees(), default=0)
    counts = [0] * (d + 1)
    for p in to_points(h):
        counts[sum(1 for lm in inside if lm >> p & 1)] += 1
    return (h.bit_count(), tuple(counts))


@dataclass(frozen=True)
class HyperplaneClass:
    size: int
    lines: int
    copies: int
    signature: tuple

    def to_json(self):
        return {"size": self.size, "lines": self.lines, "copies": self.copies,
                "signature": [self.signature[0], list(self.signature[1])]}


@dataclass(frozen=True)
class VeldkampResult:
    hyperplanes: tuple
    classes: tuple
    discarded: int
    truncated: bool

    def to_json(self):
        return {"hyperplanes": len(self.hyperplanes), "discarded": self.discarded,
                "truncated": self.truncated,
                "classes": [c.to_json() for c in self.classes]}


def veldkamp_closure(geom, seeds, cap=DEFAULT_CAP):
    """Close ``seeds`` under pairwise Veldkamp sums, keeping only hyperplanes.

    Stops with ``truncated`` set once ``cap`` hyperplanes are known.
    """
    lines = _line_masks(geom)
    univ = universe(geom)
    found = []
    index = set()
    for s in seeds:
        s = to_mask(s)
        if not is_hyperplane(geom, s, lines):
            raise ValueError("seed is not a hyperplane")
        if s not in index:
            index.add(s)
            found.append(s)
    rejected = set()
    truncated = len(found) >= cap
    found = found[:cap]
    i = 0
    while i < len(found) and not truncated:
        h = found[i]
        for j in range(i):
            t = vsum(h, found[j], univ)
            if t in index or t in rejected:
                continue
            if t == univ or t == 0 or not is_hyperplane(geom, t, lines):
                rejected.add(t)
                continue
            index.add(t)
            found.append(t)
            if len(found) >= cap:
                truncated = True
                break
        i += 1
    return VeldkampResult(tuple(found), classify(geom, found), len(rejected), truncated)


def classify(geom, hyperplanes):
    by_sig = Counter()
    lines_of = {}
    lms = _line_masks(geom)
    for h in hyperplanes:
        sig = hyperplane_signature(geom, h)
        by_sig[sig] += 1
        lines_of[sig] = sum(1 for lm in lms if lm & h == lm)
    order = sorted(by_sig, key=lambda s: (-s[0], -lines_of[s], s[1]))
    return tuple(HyperplaneClass(s[0], lines_of[s], by_sig[s], s) for s in order)


def brute_force_hyperplanes(geom):
    """Every hyperplane by exhaustive search (small geometries only)."""
    if geom.n_points > 24:
        raise ValueError("too many points for exhaustive search")
    lines = _line_masks(geom)
    univ = universe(geom)
    return [h for h in range(1, univ) if is_hyperplane(geom, h, lines)]
