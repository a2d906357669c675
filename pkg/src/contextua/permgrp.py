"""Permutation groups: Schreier-Sims, orbits, stabilizers, isomorphism.

Permutations are tuples of 0-based images and act on the right, so
``mul(p, q)`` is "first p, then q" (``i -> q[p[i]]``).  That matches the
way coset tables act.  The 1-based cycle notation only appears at the I/O
boundary (:func:`from_cycles`, :func:`to_cycles`).
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field

ISO_ORDER_BOUND = 10_000


class IntransitiveInput(ValueError):
    pass


class OrderTooLarge(ValueError):
    pass


# -- permutations -----------------------------------------------------------

def identity(n):
    return tuple(range(n))


_IDENTITIES = {}


def is_identity(p):
    e = _IDENTITIES.get(len(p))
    if e is None:
        e = _IDENTITIES[len(p)] = tuple(range(len(p)))
    return p == e


def mul(p, q):
    return tuple(map(q.__getitem__, p))


def inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def power(p, k):
    if k < 0:
        p, k = inv(p), -k
    result = identity(len(p))
    while k:
        if k & 1:
            result = mul(result, p)
        p = mul(p, p)
        k >>= 1
    return result


def conj(p, g):
    """g^-1 p g (relabel p by g)."""
    return mul(mul(inv(g), p), g)


def commute(p, q):
    return mul(p, q) == mul(q, p)


def cycles(p, singletons=False):
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        c = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            c.append(j)
            seen[j] = True
            j = p[j]
        if singletons or len(c) > 1:
            out.append(c)
    return out


def cycle_type(p):
    return sorted(len(c) for c in cycles(p, singletons=True))


def perm_order(p):
    return math.lcm(*cycle_type(p)) if p else 1


def from_cycles(cyc, degree):
    """Build a permutation from 1-based cycles; fixed points may be omitted."""
    img = list(range(degree))
    seen = set()
    for c in cyc:
        for x in c:
            if not 1 <= x <= degree:
                raise ValueError(f"point {x} outside 1..{degree}")
            if x in seen:
                raise ValueError(f"point {x} repeated in cycles")
            seen.add(x)
        for i, x in enumerate(c):
            img[x - 1] = c[(i + 1) % len(c)] - 1
    return tuple(img)


def to_cycles(p):
    """1-based cycles without fixed points."""
    return [[x + 1 for x in c] for c in cycles(p)]


def format_perm(p):
    cyc = to_cycles(p)
    if not cyc:
        return "()"
    return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)


def parse_cycles(text, degree):
    """Parse 1-based cycle notation such as ``(1,2,3)(4,5)``; ``()`` is the identity."""
    text = text.replace(" ", "")
    if not re.fullmatch(r"(\((\d+(,\d+)*)?\))*", text):
        raise ValueError(f"bad cycle notation {text!r}")
    cyc = [[int(x) for x in c.split(",")] for c in re.findall(r"\(([\d,]+)\)", text)]
    return from_cycles(cyc, degree)


def load_perm_pair(doc):
    """Parse ``{"degree": n, "alpha": ..., "beta": ...}``; each permutation is a
    list of 1-based cycles or a cycle-notation string."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    n = doc["degree"]
    if not isinstance(n, int) or n < 1:
        raise ValueError("degree must be a positive integer")
    conv = lambda v: parse_cycles(v, n) if isinstance(v, str) else from_cycles(v, n)
    return conv(doc["alpha"]), conv(doc["beta"])


# -- orbits -------------------------------------------------------------------

def orbit(gens, point):
    seen = {point}
    todo = [point]
    for x in todo:
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return todo


def orbits(gens, n):
    done = [False] * n
    out = []
    for p in range(n):
        if not done[p]:
            orb = orbit(gens, p)
            for x in orb:
                done[x] = True
            out.append(sorted(orb))
    return out


def orbit_transversal(gens, point, n):
    """Map each point of the orbit to an element carrying ``point`` to it."""
    trans = {point: identity(n)}
    todo = [point]
    for x in todo:
        u = trans[x]
        for g in gens:
            y = g[x]
            if y not in trans:
                trans[y] = mul(u, g)
                todo.append(y)
    return trans


def orbitals(gens, n):
    """Orbit id of every ordered pair (p, q) under the diagonal action.

    Returns an ``n x n`` list of ids numbered in order of first appearance
    in row-major scan.
    """
    label = [[-1] * n for _ in range(n)]
    count = 0
    for p in range(n):
        for q in range(n):
            if label[p][q] >= 0:
                continue
            label[p][q] = count
            todo = [(p, q)]
            for x, y in todo:
                for g in gens:
                    u, v = g[x], g[y]
                    if label[u][v] < 0:
                        label[u][v] = count
                        todo.append((u, v))
            count += 1
    return label


# -- Schreier-Sims ---------------------------------------------------------------

@dataclass
class _Level:
    point: int
    gens: list
    trans: dict  # orbit point -> (u, u^-1) with point^u = orbit point
    checked: set = field(default_factory=set)

    def add(self, g):
        """Add a generator, keeping existing transversal elements unchanged."""
        self.gens.append(g)
        trans = self.trans
        fresh = []
        for x in list(trans):
            y = g[x]
            if y not in trans:
                u = mul(trans[x][0], g)
                trans[y] = (u, inv(u))
                fresh.append(y)
        for x in fresh:
            u = trans[x][0]
            for h in self.gens:
                y = h[x]
                if y not in trans:
                    v = mul(u, h)
                    trans[y] = (v, inv(v))
                    fresh.append(y)


def _new_level(point, n):
    e = identity(n)
    return _Level(point, [], {point: (e, e)})


def _strip(levels, g):
    for i, lev in enumerate(levels):
        t = lev.trans.get(g[lev.point])
        if t is None:
            return g, i
        g = mul(g, t[1])
    return g, len(levels)


def _first_moved(g):
    for i, x in enumerate(g):
        if i != x:
            return i
    return None


def schreier_sims(gens, n, base_prefix=()):
    """Deterministic Schreier-Sims; returns the list of base levels.

    The base starts with ``base_prefix`` and is extended by the smallest
    moved point whenever needed.
    """
    gens = [g for g in dict.fromkeys(gens) if not is_identity(g)]
    levels = [_new_level(b, n) for b in base_prefix]
    for g in gens:
        if all(g[lev.point] == lev.point for lev in levels):
            levels.append(_new_level(_first_moved(g), n))
    for g in gens:
        for lev in levels:
            lev.add(g)
            if g[lev.point] != lev.point:
                break

    i = len(levels) - 1
    while i >= 0:
        lev = levels[i]
        found = None
        for beta in list(lev.trans):
            u = lev.trans[beta][0]
            for si, s in enumerate(lev.gens):
                if (beta, si) in lev.checked:
                    continue
                lev.checked.add((beta, si))
                h = mul(mul(u, s), lev.trans[s[beta]][1])
                if is_identity(h):
                    continue
                res, j = _strip(levels[i + 1:], h)
                j += i + 1
                if j < len(levels) or not is_identity(res):
                    found = (res, j)
                    break
            if found:
                break
        if not found:
            i -= 1
            continue
        res, j = found
        if j == len(levels):
            levels.append(_new_level(_first_moved(res), n))
        for k in range(i + 1, j + 1):
            levels[k].add(res)
        i = j
    return levels


class PermGroup:
    """A permutation group given by generators, with a lazily built BSGS."""

    def __init__(self, gens, degree=None, base_prefix=(), _levels=None):
        gens = [tuple(g) for g in gens]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise ValueError("generators of inconsistent degree")
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation: {g}")
        self.degree = degree
        self.gens = [g for g in gens if not is_identity(g)]
        self._prefix = tuple(base_prefix)
        self._levels = _levels
        self._elements = None

    @property
    def levels(self):
        if self._levels is None:
            self._levels = schreier_sims(self.gens, self.degree, self._prefix)
        return self._levels

    @property
    def base(self):
        return [lev.point for lev in self.levels]

    def order(self):
        return math.prod(len(lev.trans) for lev in self.levels)

    def __len__(self):
        return self.order()

    def contains(self, g):
        if len(g) != self.degree:
            return False
        res, _ = _strip(self.levels, tuple(g))
        return is_identity(res)

    __contains__ = contains

    def is_trivial(self):
        return not self.gens

    def orbit(self, p):
        return sorted(orbit(self.gens, p))

    def orbits(self):
        return orbits(self.gens, self.degree)

    def is_transitive(self):
        return self.degree == 1 or len(orbit(self.gens, 0)) == self.degree

    def with_base(self, prefix):
        """Same group, with a BSGS whose base starts with ``prefix``."""
        prefix = tuple(prefix)
        if tuple(self.base[:len(prefix)]) == prefix:
            return self
        strong = {g for lev in self.levels for g in lev.gens} or set(self.gens)
        return PermGroup(sorted(strong), self.degree, prefix)

    def stabilizer(self, *points):
        """Pointwise stabilizer of ``points``."""
        g = self.with_base(points)
        k = len(points)
        sub = g.levels[k:]
        gens = g.levels[k].gens if k < len(g.levels) else []
        return PermGroup(gens, self.degree, _levels=sub)

    def elements(self, bound=None):
        if self._elements is None:
            if bound is not None and self.order() > bound:
                raise OrderTooLarge(f"group of order {self.order()} > {bound}")
            elems = [identity(self.degree)]
            for lev in reversed(self.levels):
                us = [t[0] for t in lev.trans.values()]
                elems = [mul(x, u) for x in elems for u in us]
            self._elements = elems
        return self._elements

    def is_subgroup_of(self, other):
        return all(other.contains(g) for g in self.gens)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def order_at_most(gens, degree, bound):
    """|<gens>| if it is at most ``bound``, else None, by bounded closure."""
    e = identity(degree)
    seen = {e}
    todo = [e]
    for x in todo:
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                if len(seen) == bound:
                    return None
                seen.add(y)
                todo.append(y)
    return len(seen)


def group_order(gens, degree=None):
    return PermGroup(gens, degree).order()


def subgroups_equal(g1, g2):
    if g1.degree != g2.degree:
        return False
    return g1.order() == g2.order() and g1.is_subgroup_of(g2)


def point_stabilizer(group, *points):
    for p in points:
        if not 0 <= p < group.degree:
            raise ValueError(f"point {p} outside the domain")
    return group.stabilizer(*points)


def suborbits(group):
    """Orbits of Stab(0) on the points, the first one being {0}."""
    if not group.is_transitive():
        raise IntransitiveInput("group is not transitive")
    stab = group.stabilizer(0)
    orbs = orbits(stab.gens, group.degree)
    orbs.sort(key=lambda o: (o[0] != 0, o[0]))
    return orbs


def suborbit_count(group):
    return len(suborbits(group))


def normal_closure(group, gens):
    """Normal closure in ``group`` of the subgroup generated by ``gens``."""
    n = group.degree
    cur = [g for g in gens if not is_identity(g)]
    sub = PermGroup(cur, n)
    changed = True
    while changed:
        changed = False
        for h in list(sub.gens):
            for g in group.gens:
                c = conj(h, g)
                if not sub.contains(c):
                    cur.append(c)
                    sub = PermGroup(cur, n)
                    changed = True
    return sub


def derived_subgroup(group):
    gens = group.gens
    comms = []
    for i, x in enumerate(gens):
        for y in gens[i + 1:]:
            c = mul(mul(inv(x), inv(y)), mul(x, y))
            if not is_identity(c):
                comms.append(c)
    return normal_closure(group, comms)


def derived_series_orders(group, max_len=12):
    out = [group.order()]
    g = group
    while out[-1] > 1 and len(out) < max_len:
        d = derived_subgroup(g)
        if d.order() == out[-1]:
            break
        out.append(d.order())
        g = d
    return tuple(out)


# -- abstract invariants and isomorphism --------------------------------------------

def element_closure(gens, n):
    """All elements of <gens> by breadth-first multiplication."""
    e = identity(n)
    seen = {e}
    todo = [e]
    for x in todo:
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return todo


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    derived: tuple
    orders: tuple = ()
    abelianization: tuple = ()
    center: int = 0
    classes: tuple = ()
    complete: bool = False


def _class_data(group):
    elems = group.elements()
    seen = set()
    reps = []
    for x in elems:
        if x in seen:
            continue
        cls = set(element_closure_conj(x, group.gens))
        seen |= cls
        reps.append((x, len(cls)))
    return reps


def element_closure_conj(x, gens):
    seen = {x}
    todo = [x]
    for y in todo:
        for g in gens:
            z = conj(y, g)
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return todo


def fingerprint(group, bound=ISO_ORDER_BOUND):
    """Isomorphism invariants; the cheap ones only when |group| > bound."""
    order = group.order()
    if order > bound:
        return GroupFingerprint(order, ())
    derived = derived_series_orders(group)
    elems = group.elements()
    orders = Counter(perm_order(x) for x in elems)
    dsub = derived_subgroup(group)
    ab = Counter()
    for x in elems:
        k = 1
        y = x
        while not dsub.contains(y):
            y = mul(y, x)
            k += 1
        ab[k] += 1
    cls = _class_data(group)
    center = sum(1 for _, size in cls if size == 1)
    class_hist = Counter((perm_order(x), size) for x, size in cls)
    return GroupFingerprint(
        order, derived, tuple(sorted(orders.items())), tuple(sorted(ab.items())),
        center, tuple(sorted(class_hist.items())), True)


def element_labels(group):
    """Automorphism-invariant label of every element: order, conjugacy class
    size, derived-subgroup membership and the labels of its prime powers."""
    dsub = derived_subgroup(group)
    size = {}
    for x, _ in _class_data(group):
        cls = element_closure_conj(x, group.gens)
        for y in cls:
            size[y] = len(cls)
    base = {x: (perm_order(x), size[x], dsub.contains(x)) for x in size}
    out = {}
    for x, lab in base.items():
        o = lab[0]
        powers = []
        for p in (2, 3, 5, 7):
            if o % p == 0:
                y = x
                for _ in range(p - 1):
                    y = mul(y, x)
                powers.append(base[y])
        out[x] = (lab, tuple(powers))
    return out


def _small_generating_set(group, rarity):
    """Greedy generating set preferring elements whose label is rare."""
    elems = sorted(group.elements(), key=lambda x: (rarity(x), -perm_order(x), x))
    target = group.order()
    chosen = []
    span = {identity(group.degree)}
    while len(span) < target:
        g = next(x for x in elems if x not in span)
        chosen.append(g)
        span = set(element_closure(chosen, group.degree))
    return chosen


def _paired_closure(gens1, gens2, n1, n2, limit):
    """Try to extend gens1[i] -> gens2[i] to an injective homomorphism.

    Returns the number of elements in <gens1> if the map is well defined and
    injective, otherwise None.
    """
    e1, e2 = identity(n1), identity(n2)
    fwd = {e1: e2}
    back = {e2: e1}
    todo = [e1]
    for x in todo:
        y = fwd[x]
        for g, h in zip(gens1, gens2):
            u, v = mul(x, g), mul(y, h)
            w = fwd.get(u)
            if w is None:
                if v in back:
                    return None
                fwd[u] = v
                back[v] = u
                todo.append(u)
                if len(todo) > limit:
                    return None
            elif w != v:
                return None
    return len(todo)


class IsomorphismUndecided(RuntimeError):
    """The generator-image search ran out of its step budget."""


ISO_STEP_BUDGET = 400_000


def small_group_isomorphic(g1, g2, bound=ISO_ORDER_BOUND, budget=ISO_STEP_BUDGET):
    """Exact abstract isomorphism test for groups of order <= bound.

    Raises IsomorphismUndecided when the search exceeds ``budget``.
    """
    if g1.order() != g2.order():
        return False
    if g1.order() > bound:
        raise OrderTooLarge(f"order {g1.order()} exceeds {bound}")
    if g1.order() <= 3:
        return True
    if fingerprint(g1, bound) != fingerprint(g2, bound):
        return False
    return find_isomorphism(g1, g2, budget) is not None


def find_isomorphism(g1, g2, budget=ISO_STEP_BUDGET):
    """Images of a generating set of g1 defining an isomorphism onto g2.

    Generators go to elements of g2 carrying the same element label, the
    first one only up to conjugacy.  ``budget`` bounds the total number of
    group elements visited by the partial closures.
    """
    if g1.order() != g2.order():
        return None
    lab1, lab2 = element_labels(g1), element_labels(g2)
    if Counter(lab1.values()) != Counter(lab2.values()):
        return None
    by_label = {}
    for y in sorted(lab2):
        by_label.setdefault(lab2[y], []).append(y)
    gens1 = _small_generating_set(g1, lambda x: len(by_label[lab1[x]]))
    n1, n2 = g1.degree, g2.degree
    size = g1.order()
    reps2 = {x for x, _ in _class_data(g2)}
    first = [y for y in by_label[lab1[gens1[0]]] if y in reps2]
    spent = 0

    def extend(k, images):
        nonlocal spent
        if k == len(gens1):
            return images
        cands = first if k == 0 else by_label[lab1[gens1[k]]]
        for h in cands:
            if h in images:
                continue
            imgs = images + [h]
            got = _paired_closure(gens1[:k + 1], imgs, n1, n2, size)
            spent += got or size
            if spent > budget:
                raise IsomorphismUndecided(f"isomorphism search exceeded {budget} steps")
            if got is None:
                continue
            done = extend(k + 1, imgs)
            if done is not None:
                return done
        return None

    images = extend(0, [])
    if images is None:
        return None
    if _paired_closure(gens1, images, n1, n2, size) != size:
        return None
    return list(zip(gens1, images))


# -- two-point stabilizer classes ----------------------------------------------------

class StabClass:
    """Two-point stabilizers Stab(p, q) abstractly isomorphic to one another.

    ``suborbit_reps`` lists the points x with Stab(0, x) in the class (x = 0
    stands for the one-point stabilizer); ``pairs`` are all ordered pairs
    whose pointwise stabilizer belongs to it.  The representative group is
    built on first use.
    """

    def __init__(self, id, parent, rep, order, pairs=None):
        self.id = id
        self.parent = parent
        self.rep = rep
        self.order = order
        self.suborbit_reps = []
        self.pairs = pairs if pairs is not None else set()
        self._group = None
        self._fp = None

    @property
    def group(self):
        if self._group is None:
            stab0 = self.parent.stabilizer(0)
            self._group = stab0 if self.rep == 0 else stab0.stabilizer(self.rep)
        return self._group

    def fingerprint(self, bound=ISO_ORDER_BOUND):
        if self._fp is None:
            self._fp = fingerprint(self.group, bound)
        return self._fp

    @property
    def degenerate(self):
        return self.suborbit_reps == [0]

    def __repr__(self):
        return f"StabClass(id={self.id}, order={self.order}, reps={self.suborbit_reps})"


@dataclass
class TwoPointReport:
    classes: list
    s: int
    s_distinct: int
    exact: bool
    s_upper: int
    pair_class: list

    @property
    def axiom1_decided(self):
        return self.exact or self.s >= 3 or self.s_upper < 3


def suborbit_buckets(orb):
    """Suborbit representatives grouped by equality or conjugacy of Stab(0, x).

    x joins 0 when its suborbit is a fixed point of Stab(0) (equal
    subgroups), and paired suborbits are merged (conjugate subgroups).
    Buckets are lists of representatives, ordered by their least element.
    """
    n = len(orb)
    row = orb[0]
    length = Counter(row)
    seen = {}
    for x in range(n):
        seen.setdefault(row[x], x)
    parent = {}

    def find(k):
        while parent.setdefault(k, k) != k:
            k = parent[k]
        return k

    def union(k, l):
        k, l = find(k), find(l)
        if k != l:
            parent[max(k, l)] = min(k, l)

    for lab, x in seen.items():
        if length[lab] == 1:
            union(lab, row[0])
        union(lab, orb[x][0])
    buckets = {}
    for lab, x in seen.items():
        buckets.setdefault(find(lab), []).append(x)
    return sorted((sorted(xs) for xs in buckets.values()), key=lambda xs: xs[0])


def s_bounds(orb):
    """Bounds on s from suborbit lengths alone.

    Stab(0, x) has order |P| / (n * |suborbit of x|), so buckets of distinct
    suborbit length hold non-isomorphic groups; the bucket count is an upper
    bound.
    """
    length = Counter(orb[0])
    buckets = suborbit_buckets(orb)
    lengths = {length[orb[0][xs[0]]] for xs in buckets}
    return len(lengths), len(buckets)


def two_point_classes(group, bound=ISO_ORDER_BOUND, orb=None):
    """Bucket the stabilizers Stab(0, x), x a suborbit representative, by
    abstract isomorphism.

    ``s`` counts classes including the degenerate pair x = 0 (the one-point
    stabilizer); ``s_distinct`` counts only pairs of distinct points.  Groups
    of equal order above ``bound`` are not compared: then ``exact`` is False
    and the true count lies in ``s``..``s_upper``.
    """
    n = group.degree
    if not group.is_transitive():
        raise IntransitiveInput("group is not transitive")
    if orb is None:
        orb = orbitals(group.gens, n)
    row = orb[0]
    length = Counter(row)
    stab_order = group.order() // n
    groups = suborbit_buckets(orb)

    classes = []
    undecided = 0
    for xs in groups:
        x = xs[0]
        order = stab_order // length[row[x]]
        cand = StabClass(len(classes), group, x, order)
        home = None
        maybe = False
        for c in classes:
            if c.order != order:
                continue
            if order <= 3:
                home = c
                break
            if order > bound:
                maybe = True
                continue
            if c.fingerprint(bound) != cand.fingerprint(bound):
                continue
            try:
                iso = find_isomorphism(c.group, cand.group)
            except IsomorphismUndecided:
                maybe = True
                continue
            if iso is not None:
                home = c
                break
        if home is None:
            if maybe:
                undecided += 1
            home = cand
            classes.append(home)
        home.suborbit_reps.extend(xs)

    by_orbital = {}
    for c in classes:
        c.suborbit_reps.sort()
        for x in c.suborbit_reps:
            by_orbital[row[x]] = c.id
    pair_class = [[by_orbital[orb[p][q]] for q in range(n)] for p in range(n)]
    for p in range(n):
        for q in range(n):
            classes[pair_class[p][q]].pairs.add((p, q))
    s = len(classes)
    distinct = len({pair_class[0][x] for x in range(1, n)})
    return TwoPointReport(classes, s - undecided, distinct, undecided == 0, s, pair_class)


def normal_closure_quotient(group, orb=None):
    """Order of P / M, M the normal closure of a point stabilizer.

    M is generated by all point stabilizers, so its orbits are the classes
    of the equivalence generated by "y and z lie in one suborbit of some x".
    M is normal, so P / M acts regularly on those orbits.
    """
    n = group.degree
    if orb is None:
        orb = orbitals(group.gens, n)
    parent = list(range(n))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    comps = n
    for x in range(n):
        first = {}
        for y, lab in enumerate(orb[x]):
            z = first.setdefault(lab, y)
            if z != y:
                a, b = find(y), find(z)
                if a != b:
                    parent[a] = b
                    comps -= 1
    return comps
