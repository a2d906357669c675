"""Classes of relator-respecting generating pairs of a permutation group.

A pair (x, y) of P stands for the homomorphism a -> x, b -> y.  Two pairs
give the same map up to an automorphism of P exactly when the subgroup of
P x P generated by (x1, x2) and (y1, y2) is the graph of a bijection, i.e.
has order |P|.  The natural map a -> alpha, b -> beta is unique up to
automorphisms iff there is a single class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .permgrp import (OrderTooLarge, PermGroup, _class_data, commute, conj,
                      identity, inv, mul, perm_order)

DEFAULT_EPI_BOUND = 2000


@dataclass(frozen=True)
class EpiClassReport:
    class_count: int
    representatives: tuple
    truncated: bool = False

    @property
    def unique(self):
        return self.class_count == 1 and not self.truncated


def evaluate(word, x, y):
    """Image of a word under a -> x, b -> y."""
    n = len(x)
    images = {1: x, -1: inv(x), 2: y, -2: inv(y)}
    g = identity(n)
    for letter in word:
        g = mul(g, images[letter])
    return g


def satisfies(relators, x, y):
    e = identity(len(x))
    return all(evaluate(r, x, y) == e for r in relators)


def _letter_exponent(relators, letter):
    """gcd of k over relators that are powers of a single letter."""
    g = 0
    for r in relators:
        if all(abs(c) == letter for c in r):
            g = math.gcd(g, sum(1 if c > 0 else -1 for c in r))
    return g


def _diag(p, q):
    n = len(p)
    return p + tuple(n + v for v in q)


def diagonal_equivalent(pair1, pair2, order=None):
    """True iff x1 -> x2, y1 -> y2 extends to an isomorphism <x1,y1> -> <x2,y2>.

    ``order`` is |<x1, y1>| when known; both pairs must generate groups of
    that order for the test to mean "same epimorphism up to automorphism".
    """
    (x1, y1), (x2, y2) = pair1, pair2
    if order is None:
        order = PermGroup([x1, y1], len(x1)).order()
        if PermGroup([x2, y2], len(x2)).order() != order:
            return False
    d = PermGroup([_diag(x1, x2), _diag(y1, y2)], 2 * len(x1))
    return d.order() == order


def generating_pairs(relators, group):
    """All (x, y) with the relators holding and <x, y> = group (brute force)."""
    order = group.order()
    elems = group.elements()
    out = []
    for x in elems:
        for y in elems:
            if satisfies(relators, x, y) and PermGroup([x, y], group.degree).order() == order:
                out.append((x, y))
    return out


def epi_classes(pres, group, bound=DEFAULT_EPI_BOUND, max_pairs=100_000):
    """Aut(P)-classes of epimorphisms from <a, b | relators> onto P.

    Pairs related by an inner automorphism are skipped up front: x runs over
    conjugacy class representatives and y over the orbits of the
    centralizer of x acting by conjugation.  The survivors are split into
    classes by the diagonal test.
    """
    order = group.order()
    if order > bound:
        raise OrderTooLarge(f"|P| = {order} exceeds the epimorphism bound {bound}")
    relators = tuple(pres.relators)
    n = group.degree
    elems = group.elements()
    ea = _letter_exponent(relators, 1)
    eb = _letter_exponent(relators, 2)

    def allowed(g, e):
        return e == 0 or e % perm_order(g) == 0

    xs = [x for x, _ in _class_data(group) if allowed(x, ea)]
    ys_all = [y for y in elems if allowed(y, eb)]
    pairs = []
    truncated = False
    for x in xs:
        cent = [g for g in elems if commute(g, x)]
        done = set()
        for y in ys_all:
            if y in done:
                continue
            done.update(conj(y, g) for g in cent)
            if not satisfies(relators, x, y):
                continue
            if PermGroup([x, y], n).order() != order:
                continue
            pairs.append((x, y))
            if len(pairs) >= max_pairs:
                truncated = True
                break
        if truncated:
            break

    reps = []
    for p in pairs:
        if not any(diagonal_equivalent(r, p, order) for r in reps):
            reps.append(p)
    return EpiClassReport(len(reps), tuple(reps), truncated)
