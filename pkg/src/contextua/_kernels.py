"""Compiled inner loops for the low-index search and orbital counting.

The search state lives entirely in numpy arrays so a run can stop after a
chunk of results and be resumed later.  Layout of ``st`` (int64):
0 depth, 1 m, 2 trail length, 3 nodes, 4 done flag.
"""

import numpy as np
from numba import njit

ST_DEPTH, ST_M, ST_TRAIL, ST_NODES, ST_DONE = range(5)


@njit(cache=True)
def _assign(T, c, x, t, trail, st, wdata, wstart, wlen, bycol, bycol_start, queue):
    if T[4 * t + (x ^ 1)] >= 0:
        return False
    T[4 * c + x] = t
    T[4 * t + (x ^ 1)] = c
    tl = st[ST_TRAIL]
    trail[tl] = 4 * c + x
    trail[tl + 1] = 4 * t + (x ^ 1)
    st[ST_TRAIL] = tl + 2
    qn = 0
    queue[0] = c
    queue[1] = x
    queue[2] = t
    queue[3] = x ^ 1
    qn = 2
    while qn > 0:
        qn -= 1
        c0 = queue[2 * qn]
        x0 = queue[2 * qn + 1]
        for k in range(bycol_start[x0], bycol_start[x0 + 1]):
            wid = bycol[k]
            s0 = wstart[wid]
            L = wlen[wid]
            f = c0
            i = 0
            while i < L:
                nxt = T[4 * f + wdata[s0 + i]]
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
                nxt = T[4 * b + (wdata[s0 + j] ^ 1)]
                if nxt < 0:
                    break
                b = nxt
                j -= 1
            if j == i:
                y = wdata[s0 + i]
                if T[4 * b + (y ^ 1)] >= 0:
                    return False
                T[4 * f + y] = b
                T[4 * b + (y ^ 1)] = f
                tl = st[ST_TRAIL]
                trail[tl] = 4 * f + y
                trail[tl + 1] = 4 * b + (y ^ 1)
                st[ST_TRAIL] = tl + 2
                queue[2 * qn] = f
                queue[2 * qn + 1] = y
                queue[2 * qn + 2] = b
                queue[2 * qn + 3] = y ^ 1
                qn += 2
    return True


@njit(cache=True)
def _is_canonical(T, m, label, order):
    for s in range(1, m):
        for k in range(m):
            label[k] = -1
        label[s] = 0
        order[0] = s
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
                    order[nxt] = t
                    nxt += 1
                if lt != cur:
                    if lt < cur:
                        verdict = -1
                    else:
                        verdict = 1
                    break
            if verdict != 0:
                break
        if verdict < 0:
            return False
    return True


@njit(cache=True)
def _first_undefined(T, pos, m):
    end = 4 * m
    while pos < end and T[pos] >= 0:
        pos += 1
    return pos


@njit(cache=True)
def search_chunk(n, T, trail, st, spos, snext, smark, sm, out, budget,
                 wdata, wstart, wlen, bycol, bycol_start):
    """Advance the search until ``out`` is full or the tree is exhausted.

    Returns the number of rows written to ``out``; ``st[ST_DONE]`` is 1 when
    the search finished and 2 when the node budget ran out.
    """
    queue = np.empty(16 * n + 8, np.int64)
    label = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    count = 0
    cap = out.shape[0]
    while st[ST_DEPTH] >= 0:
        d = st[ST_DEPTH]
        # undo whatever the previous candidate at this depth assigned
        mark = smark[d]
        tl = st[ST_TRAIL]
        while tl > mark:
            tl -= 1
            T[trail[tl]] = -1
        st[ST_TRAIL] = mark
        m = sm[d]
        st[ST_M] = m
        pos = spos[d]
        c = pos // 4
        x = pos % 4
        t = snext[d]
        while t < m and T[4 * t + (x ^ 1)] >= 0:
            t += 1
        if t > m or (t == m and m >= n):
            st[ST_DEPTH] = d - 1
            continue
        snext[d] = t + 1
        st[ST_NODES] += 1
        if st[ST_NODES] > budget:
            st[ST_DONE] = 2
            return count
        if t == m:
            st[ST_M] = m + 1
        ok = _assign(T, c, x, t, trail, st, wdata, wstart, wlen, bycol, bycol_start, queue)
        if ok:
            ok = _is_canonical(T, st[ST_M], label, order)
        if not ok:
            continue
        m2 = st[ST_M]
        p2 = _first_undefined(T, pos, m2)
        if p2 == 4 * m2:
            if m2 == n:
                for k in range(4 * n):
                    out[count, k] = T[k]
                count += 1
                if count == cap:
                    return count
            continue
        d2 = d + 1
        st[ST_DEPTH] = d2
        spos[d2] = p2
        snext[d2] = 0
        smark[d2] = st[ST_TRAIL]
        sm[d2] = m2
    st[ST_DONE] = 1
    return count


@njit(cache=True)
def _find(parent, i):
    r = i
    while parent[r] != r:
        r = parent[r]
    while parent[i] != r:
        nxt = parent[i]
        parent[i] = r
        i = nxt
    return r


@njit(cache=True)
def orbital_counts(tables, n):
    """Number of orbits on ordered pairs for each flat table (columns a, b)."""
    k = tables.shape[0]
    res = np.empty(k, np.int64)
    parent = np.empty(n * n, np.int64)
    for r in range(k):
        for i in range(n * n):
            parent[i] = i
        comps = n * n
        for p in range(n):
            for q in range(n):
                u = p * n + q
                for col in (0, 2):
                    v = tables[r, 4 * p + col] * n + tables[r, 4 * q + col]
                    a = _find(parent, u)
                    b = _find(parent, v)
                    if a != b:
                        parent[b] = a
                        comps -= 1
        res[r] = comps
    return res
