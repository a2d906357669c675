"""Conjugacy classes of subgroups of given index (Sims' low-index method).

The search fills a partial coset table in row-major order (cosets in
order, columns a, A, b, B).  A new coset always receives the next free
label, so every table met is in breadth-first standard form.  After each
definition the relators are scanned to deduce forced entries, and a branch
is cut as soon as re-rooting the partial table at some other coset gives a
lexicographically smaller table: that branch can only lead to tables which
are not the minimum of their conjugacy class.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cosets import CosetTable, _standardize, word_cols
from .words import Presentation

log = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 10**9


class NodeBudgetExceeded(RuntimeError):
    def __init__(self, budget, found):
        super().__init__(f"node budget {budget} exhausted after {len(found)} classes")
        self.budget = budget
        self.found = found


@dataclass(frozen=True)
class CanonicalTable:
    table: CosetTable
    canonical: bool = True

    @property
    def n(self):
        return self.table.n

    def encoding(self):
        return self.table.encoding()


def canonical_form(table: CosetTable) -> CanonicalTable:
    """Minimal re-rooted standard table over all choices of base coset."""
    best = min(_standardize(table.rows, s) for s in range(table.n))
    return CanonicalTable(CosetTable(best, table.presentation))


def _deduction_words(relators):
    """Cyclic conjugates of every relator and its inverse, by first column."""
    by_col = [[] for _ in range(4)]
    seen = set()
    for r in relators:
        w = word_cols(r)
        for cand in (w, [x ^ 1 for x in reversed(w)]):
            for k in range(len(cand)):
                c = tuple(cand[k:] + cand[:k])
                if c not in seen:
                    seen.add(c)
                    by_col[c[0]].append(c)
    return by_col


class _Search:
    def __init__(self, relators, n, budget):
        self.n = n
        self.words = _deduction_words(relators)
        self.budget = budget
        self.nodes = 0
        self.T = [-1] * (4 * n)
        self.m = 1
        self.found = []

    # -- deduction -----------------------------------------------------------

    def assign(self, c, x, t, trail):
        """Set (c, x) -> t plus its inverse and close under the relators."""
        T = self.T
        if T[4 * t + (x ^ 1)] >= 0:
            return False
        T[4 * c + x] = t
        T[4 * t + (x ^ 1)] = c
        trail.append(4 * c + x)
        trail.append(4 * t + (x ^ 1))
        queue = [(c, x), (t, x ^ 1)]
        words = self.words
        while queue:
            c0, x0 = queue.pop()
            for w in words[x0]:
                L = len(w)
                f = c0
                i = 0
                while i < L:
                    nxt = T[4 * f + w[i]]
                    if nxt < 0:
                        break
                    f = nxt
                    i += 1
                if i == L:
                    if f != c0:
                        return False
                    continue
                b = c0
                j = L - 1
                while j > i:
                    nxt = T[4 * b + (w[j] ^ 1)]
                    if nxt < 0:
                        break
                    b = nxt
                    j -= 1
                if j == i:
                    y = w[i]
                    if T[4 * b + (y ^ 1)] >= 0:
                        return False
                    T[4 * f + y] = b
                    T[4 * b + (y ^ 1)] = f
                    trail.append(4 * f + y)
                    trail.append(4 * b + (y ^ 1))
                    queue.append((f, y))
                    queue.append((b, y ^ 1))
        return True

    # -- canonicity ------------------------------------------------------------

    def is_canonical(self):
        T = self.T
        m = self.m
        for s in range(1, m):
            label = [-1] * m
            label[s] = 0
            order = [s]
            nxt = 1
            verdict = 0
            for i in range(m):
                old = order[i]
                for x in range(4):
                    t = T[4 * old + x]
                    cur = T[4 * i + x]
                    if t < 0 or cur < 0:
                        verdict = 1
                        break
                    lt = label[t]
                    if lt < 0:
                        lt = nxt
                        label[t] = nxt
                        order.append(t)
                        nxt += 1
                    if lt != cur:
                        verdict = -1 if lt < cur else 1
                        break
                if verdict:
                    break
            if verdict < 0:
                return False
        return True

    # -- search -----------------------------------------------------------------

    def first_undefined(self, pos):
        T = self.T
        end = 4 * self.m
        while pos < end and T[pos] >= 0:
            pos += 1
        return pos

    def choices(self, pos):
        c, x = divmod(pos, 4)
        T = self.T
        out = [t for t in range(self.m) if T[4 * t + (x ^ 1)] < 0]
        if self.m < self.n:
            out.append(self.m)
        return c, x, out

    def undo(self, trail, mark, m):
        T = self.T
        while len(trail) > mark:
            T[trail.pop()] = -1
        self.m = m

    def apply(self, pos, t, trail):
        """Branch (pos -> t); returns False if the branch dies at once."""
        c, x = divmod(pos, 4)
        if t == self.m:
            self.m += 1
        return self.assign(c, x, t, trail) and self.is_canonical()

    def descend(self, pos, trail):
        self.nodes += 1
        if self.nodes > self.budget:
            raise NodeBudgetExceeded(self.budget, self.found)
        pos = self.first_undefined(pos)
        if pos == 4 * self.m:
            if self.m == self.n:
                self.found.append(tuple(self.T))
            return
        c, x, opts = self.choices(pos)
        m = self.m
        for t in opts:
            mark = len(trail)
            if self.apply(pos, t, trail):
                self.descend(pos, trail)
            self.undo(trail, mark, m)

    def replay(self, path, trail):
        pos = 0
        for t in path:
            pos = self.first_undefined(pos)
            if not self.apply(pos, t, trail):
                return None
        return pos

    def prefixes(self, depth):
        """Branch decision sequences down to ``depth`` (leaves included)."""
        out = []
        trail = []

        def walk(pos, path):
            pos = self.first_undefined(pos)
            if len(path) == depth or pos == 4 * self.m:
                out.append(tuple(path))
                return
            _, _, opts = self.choices(pos)
            m = self.m
            for t in opts:
                mark = len(trail)
                if self.apply(pos, t, trail):
                    walk(pos, path + [t])
                self.undo(trail, mark, m)

        walk(0, [])
        return out


def _run_subtree(args):
    relators, n, budget, path = args
    s = _Search(relators, n, budget)
    trail = []
    pos = s.replay(path, trail)
    if pos is not None:
        s.descend(pos, trail)
    return s.found, s.nodes


def _to_tables(found, pres, n):
    out = []
    for flat in found:
        flat = [int(v) for v in flat]
        rows = tuple(tuple(flat[4 * i:4 * i + 4]) for i in range(n))
        out.append(CanonicalTable(CosetTable(rows, pres)))
    return out


def _word_arrays(relators):
    by_col = _deduction_words(relators)
    data, start, length, ids, col_start = [], [], [], [], [0]
    for col in range(4):
        for w in by_col[col]:
            ids.append(len(start))
            start.append(len(data))
            length.append(len(w))
            data.extend(w)
        col_start.append(len(ids))
    as64 = lambda v: np.asarray(v, dtype=np.int64)
    return as64(data), as64(start), as64(length), as64(ids), as64(col_start)


def iter_flat_tables(pres: Presentation, n: int, node_budget=DEFAULT_NODE_BUDGET,
                     chunk=4096):
    """Stream canonical tables as ``(k, 4n)`` int arrays, in ascending order.

    Runs the compiled search; raises NodeBudgetExceeded when the budget is
    spent (the exception carries the number of classes found so far).
    """
    from ._kernels import search_chunk

    if n < 1:
        raise ValueError("index must be >= 1")
    words = _word_arrays(pres.relators)
    T = np.full(4 * n, -1, np.int64)
    trail = np.zeros(4 * n + 4, np.int64)
    depth_cap = 4 * n + 2
    spos = np.zeros(depth_cap, np.int64)
    snext = np.zeros(depth_cap, np.int64)
    smark = np.zeros(depth_cap, np.int64)
    sm = np.zeros(depth_cap, np.int64)
    sm[0] = 1
    st = np.zeros(5, np.int64)
    st[1] = 1
    out = np.empty((chunk, 4 * n), np.int64)
    total = 0
    while True:
        k = search_chunk(n, T, trail, st, spos, snext, smark, sm, out,
                         node_budget, *words)
        total += k
        if k:
            yield out[:k].copy()
        if st[4] == 2:
            raise NodeBudgetExceeded(node_budget, [None] * total)
        if st[4] == 1:
            log.debug("index %d: %d classes, %d nodes", n, total, st[3])
            return


def low_index_classes(pres: Presentation, n: int, jobs=1,
                      node_budget=DEFAULT_NODE_BUDGET, split_depth=None,
                      compiled=True):
    """One canonical coset table per conjugacy class of index-n subgroups.

    Tables come out in ascending order of their row-major encoding.  The
    default path is the compiled search; ``compiled=False`` runs the pure
    Python search, optionally split over ``jobs`` worker processes (the
    merged output is identical).
    """
    if n < 1:
        raise ValueError("index must be >= 1")
    if compiled and jobs <= 1:
        found = [row for part in iter_flat_tables(pres, n, node_budget) for row in part]
        return _to_tables(found, pres, n)
    rels = tuple(pres.relators)
    if jobs <= 1:
        s = _Search(rels, n, node_budget)
        s.descend(0, [])
        log.debug("index %d: %d classes, %d nodes", n, len(s.found), s.nodes)
        return _to_tables(sorted(s.found), pres, n)

    depth = split_depth if split_depth is not None else min(n, 4)
    paths = _Search(rels, n, node_budget).prefixes(depth)
    found = []
    nodes = 0
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for part, k in ex.map(_run_subtree, [(rels, n, node_budget, p) for p in paths]):
            found.extend(part)
            nodes += k
            if nodes > node_budget:
                raise NodeBudgetExceeded(node_budget, sorted(found))
    return _to_tables(sorted(found), pres, n)


def count_classes(pres: Presentation, n: int, node_budget=DEFAULT_NODE_BUDGET):
    return sum(len(part) for part in iter_flat_tables(pres, n, node_budget))
