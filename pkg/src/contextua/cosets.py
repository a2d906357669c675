"""Coset enumeration (HLT with lookahead), transversals, Schreier generators.

Coset tables are stored 0-based: coset 0 is the subgroup itself and the
four columns hold the action of a, a^-1, b, b^-1 in that order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .permgrp import PermGroup, normal_closure
from .words import Presentation, Word, render

DEFAULT_LIMIT = 1 << 20

# column of each signed letter; the inverse letter sits in column ^ 1
COL = {1: 0, -1: 1, 2: 2, -2: 3}
LETTER_OF_COL = (1, -1, 2, -2)


class LimitExceeded(RuntimeError):
    def __init__(self, limit):
        super().__init__(f"coset enumeration exceeded {limit} cosets")
        self.limit = limit


class TableError(ValueError):
    pass


def word_cols(w):
    return [COL[x] for x in w]


@dataclass(frozen=True)
class CosetTable:
    """Transitive action of a, b on cosets 0..n-1 (coset 0 = H)."""

    rows: tuple
    presentation: Presentation | None = None

    @property
    def n(self):
        return len(self.rows)

    def act(self, coset, w):
        for x in w:
            coset = self.rows[coset][COL[x]]
        return coset

    def perm(self, col):
        return tuple(r[col] for r in self.rows)

    @property
    def alpha(self):
        return self.perm(0)

    @property
    def beta(self):
        return self.perm(2)

    def encoding(self):
        return tuple(x for r in self.rows for x in r)

    def validate(self, subgens=()):
        """Raise TableError unless every coset-table invariant holds."""
        n = self.n
        for i, r in enumerate(self.rows):
            if len(r) != 4:
                raise TableError(f"row {i} has {len(r)} entries")
            for c, t in enumerate(r):
                if not (isinstance(t, int) and 0 <= t < n):
                    raise TableError(f"entry ({i},{c}) undefined or out of range")
                if self.rows[t][c ^ 1] != i:
                    raise TableError(f"inverse mismatch at ({i},{c})")
        if self.presentation is not None:
            for rel in self.presentation.relators:
                for i in range(n):
                    if self.act(i, rel) != i:
                        raise TableError(f"relator {render(rel)} moves coset {i}")
        for w in subgens:
            if self.act(0, w) != 0:
                raise TableError(f"subgroup word {render(w)} moves coset 0")
        seen = {0}
        todo = [0]
        for i in todo:
            for t in self.rows[i]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        if len(seen) != n:
            raise TableError("action is not transitive")

    def standardized(self, start=0):
        """Relabel cosets in breadth-first order from ``start``."""
        return CosetTable(_standardize(self.rows, start), self.presentation)

    def to_json(self):
        return [[t + 1 for t in r] for r in self.rows]


def _standardize(rows, start=0):
    label = {start: 0}
    order = [start]
    for c in order:
        for t in rows[c]:
            if t not in label:
                label[t] = len(order)
                order.append(t)
    return tuple(tuple(label[t] for t in rows[c]) for c in order)


def table_from_perms(alpha, beta, presentation=None, start=0, standardize=True):
    """Coset table of the action generated by two permutations.

    With ``standardize=False`` the given point labels are kept (point 0 then
    plays the role of the subgroup coset).
    """
    from .permgrp import inv
    if len(alpha) != len(beta):
        raise TableError("permutations of different degree")
    ai, bi = inv(alpha), inv(beta)
    rows = tuple((alpha[i], ai[i], beta[i], bi[i]) for i in range(len(alpha)))
    if standardize:
        rows = _standardize(rows, start)
    return CosetTable(rows, presentation)


class _Enumerator:
    def __init__(self, relators, limit):
        self.rels = [word_cols(r) for r in relators]
        self.limit = limit
        self.table = [[None] * 4]
        self.parent = [0]
        self.live = 1

    def rep(self, c):
        parent = self.parent
        r = c
        while parent[r] != r:
            r = parent[r]
        while parent[c] != r:
            parent[c], c = r, parent[c]
        return r

    def is_live(self, c):
        return self.parent[c] == c

    def define(self, c, x):
        if self.live >= self.limit:
            self.lookahead()
            if not self.is_live(c):
                return
            if self.live >= self.limit:
                raise LimitExceeded(self.limit)
        d = len(self.table)
        self.table.append([None] * 4)
        self.parent.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def scan(self, c, w, fill):
        """Scan relator columns ``w`` at coset c, defining cosets if ``fill``."""
        table = self.table
        f = c
        b = c
        i = 0
        j = len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] is not None:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, w[i])
            if not self.is_live(c):
                return
            f, b = self.rep(f), self.rep(b)

    def merge(self, k, l, queue):
        a, b = self.rep(k), self.rep(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            self.live -= 1
            queue.append(hi)

    def coincidence(self, k, l):
        table = self.table
        queue = []
        self.merge(k, l, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(4):
                d = table[g][x]
                if d is None:
                    continue
                table[d][x ^ 1] = None
                mu, nu = self.rep(g), self.rep(d)
                if table[mu][x] is not None:
                    self.merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] is not None:
                    self.merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def lookahead(self):
        for c in range(len(self.table)):
            for w in self.rels:
                if not self.is_live(c):
                    break
                self.scan(c, w, fill=False)

    def run(self, subgens):
        for w in subgens:
            self.scan(0, word_cols(w), fill=True)
        c = 0
        while c < len(self.table):
            for w in self.rels:
                if not self.is_live(c):
                    break
                self.scan(c, w, fill=True)
            if self.is_live(c):
                for x in range(4):
                    if self.table[c][x] is None:
                        self.define(c, x)
            c += 1
        live = [c for c in range(len(self.table)) if self.is_live(c)]
        index = {c: i for i, c in enumerate(live)}
        return tuple(tuple(index[t] for t in self.table[c]) for c in live)


def todd_coxeter(pres: Presentation, subgens=(), limit=DEFAULT_LIMIT) -> CosetTable:
    """Enumerate the cosets of <subgens> in the group presented by ``pres``.

    Raises :class:`LimitExceeded` if more than ``limit`` live cosets are
    needed.  The result is standardized (breadth-first labels from coset 0).
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    rows = _Enumerator(pres.relators, limit).run([Word(w) for w in subgens])
    return CosetTable(_standardize(rows), pres)


LETTER_ORDER = (0, 1, 2, 3)
REVERSED_LETTER_ORDER = (3, 2, 1, 0)


def transversal(table: CosetTable, letter_order=LETTER_ORDER) -> list:
    """Shortest representative of every coset, ties broken by a < A < b < B.

    ``letter_order`` lists the columns in tie-break order.
    """
    reps = [None] * table.n
    reps[0] = Word()
    todo = [0]
    for c in todo:
        row = table.rows[c]
        for col in letter_order:
            t = row[col]
            if reps[t] is None:
                reps[t] = reps[c] * (LETTER_OF_COL[col],)
                todo.append(t)
    return reps


def action_generators(table: CosetTable):
    """The permutations of the cosets induced by a and b."""
    return table.alpha, table.beta


def schreier_generators(table: CosetTable, reps=None) -> list:
    """Nontrivial words rep(i) x rep(i.x)^-1 generating the subgroup."""
    if reps is None:
        reps = transversal(table)
    out = {}
    for i in range(table.n):
        for x in (1, 2):
            w = reps[i] * (x,) * reps[table.rows[i][COL[x]]].inverse()
            if w:
                out.setdefault(w, None)
    return list(out)


class Closure(enum.Enum):
    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class NormalClosureResult:
    status: Closure
    quotient_order: int | None = None

    @property
    def full(self):
        return self.status is Closure.YES


def abelian_quotient_order(relators):
    """Order of the abelianization of <a, b | relators>, None if infinite."""
    vecs = [(sum(1 if x == 1 else -1 for x in r if abs(x) == 1),
             sum(1 if x == 2 else -1 for x in r if abs(x) == 2)) for r in relators]
    g = 0
    for i, (p, q) in enumerate(vecs):
        for r, s in vecs[i + 1:]:
            g = _gcd(g, p * s - q * r)
    return g or None


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def normal_closure_is_full(pres: Presentation, subgens, limit=DEFAULT_LIMIT):
    """Decide whether the normal closure of <subgens> is the whole group.

    Enumerates the cosets of the trivial subgroup in <a, b | rels, subgens>.
    A quotient with infinite abelianization is reported as NO without
    enumeration (quotient_order None).
    """
    rels = tuple(pres.relators) + tuple(Word(w) for w in subgens if Word(w))
    if abelian_quotient_order(rels) is None:
        return NormalClosureResult(Closure.NO, None)
    try:
        table = todd_coxeter(Presentation(rels), (), limit)
    except LimitExceeded:
        return NormalClosureResult(Closure.UNDETERMINED, None)
    if table.n == 1:
        return NormalClosureResult(Closure.YES, 1)
    return NormalClosureResult(Closure.NO, table.n)


def normal_closure_via_action(group: PermGroup):
    """Same question answered inside the finite image P of the coset action.

    The core of H is the kernel of G -> P, so G / <<H>> is P modulo the
    normal closure of the point stabilizer P_0.
    """
    stab = group.stabilizer(0)
    order = group.order()
    if stab.is_trivial():
        sub = 1
    else:
        sub = normal_closure(group, stab.gens).order()
    q = order // sub
    return NormalClosureResult(Closure.YES if q == 1 else Closure.NO, q)
