# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: exact canonical labeling and exact-length cycle
search.  Mirrors ``spectrex.kernels._pure`` bit for bit; see that module
for the algorithm notes."""

from libc.stdint cimport uint16_t, uint64_t, int64_t

from ._pure import CanonicalizationError, CANON_NODE_BUDGET
from . import _pure

BACKEND_NAME = "fast"

PRESENT = 1
ABSENT = 0
UNKNOWN = -1

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


# ---------------------------------------------------------------------------
# Canonical labeling
# ---------------------------------------------------------------------------

cdef void _refine(int n, uint16_t* rows, int* color) noexcept:
    cdef int degs[16]
    cdef uint64_t sigs[16]
    cdef uint64_t uniq[16]
    cdef int nb[16]
    cdef int v, i, j, k, nu, nnb, changed
    cdef uint64_t sig, key
    for v in range(n):
        degs[v] = __builtin_popcountll(rows[v])
    # initial color: rank of degree, descending
    nu = 0
    for v in range(n):
        key = <uint64_t> degs[v]
        for i in range(nu):
            if uniq[i] == key:
                break
        else:
            uniq[nu] = key
            nu += 1
    # sort unique degrees descending (insertion)
    for i in range(1, nu):
        key = uniq[i]
        j = i - 1
        while j >= 0 and uniq[j] < key:
            uniq[j + 1] = uniq[j]
            j -= 1
        uniq[j + 1] = key
    for v in range(n):
        for i in range(nu):
            if uniq[i] == <uint64_t> degs[v]:
                color[v] = i
                break
    while True:
        for v in range(n):
            nnb = 0
            for j in range(n):
                if (rows[v] >> j) & 1:
                    nb[nnb] = color[j]
                    nnb += 1
            # sort neighbor colors descending
            for i in range(1, nnb):
                k = nb[i]
                j = i - 1
                while j >= 0 and nb[j] < k:
                    nb[j + 1] = nb[j]
                    j -= 1
                nb[j + 1] = k
            sig = <uint64_t> color[v]
            for i in range(15):
                sig = (sig << 4) | (<uint64_t> nb[i] if i < nnb else 0)
            sigs[v] = sig
        # rank signatures ascending
        nu = 0
        for v in range(n):
            key = sigs[v]
            for i in range(nu):
                if uniq[i] == key:
                    break
            else:
                uniq[nu] = key
                nu += 1
        for i in range(1, nu):
            key = uniq[i]
            j = i - 1
            while j >= 0 and uniq[j] > key:
                uniq[j + 1] = uniq[j]
                j -= 1
            uniq[j + 1] = key
        changed = 0
        for v in range(n):
            for i in range(nu):
                if uniq[i] == sigs[v]:
                    if color[v] != i:
                        changed = 1
                        color[v] = i
                    break
        if not changed:
            return


cdef struct CState:
    int n
    uint16_t* rows
    int* color
    int* class_of_pos
    uint16_t* best
    int have_best
    uint16_t* cols
    int* placed
    int64_t nodes


cdef int _canon_dfs(CState* st, int p, int used, int tie) noexcept:
    """Returns 0 on success, 1 when the node budget is exceeded."""
    cdef int n = st.n
    cdef int v, i, want, ncand, rc
    cdef uint16_t val, top
    cdef uint16_t cand_val[16]
    cdef int cand_v[16]
    cdef uint16_t rv
    if p == n:
        if not st.have_best:
            for i in range(n):
                st.best[i] = st.cols[i]
            st.have_best = 1
        else:
            for i in range(n):
                if st.cols[i] != st.best[i]:
                    if st.cols[i] > st.best[i]:
                        for v in range(n):
                            st.best[v] = st.cols[v]
                    break
        return 0
    want = st.class_of_pos[p]
    ncand = 0
    top = 0
    for v in range(n):
        if (used >> v) & 1 or st.color[v] != want:
            continue
        rv = st.rows[v]
        val = 0
        for i in range(p):
            val = (val << 1) | ((rv >> st.placed[i]) & 1)
        cand_val[ncand] = val
        cand_v[ncand] = v
        if val > top:
            top = val
        ncand += 1
    if ncand == 0:
        return 0
    if tie and st.have_best:
        if top < st.best[p]:
            return 0
        if top > st.best[p]:
            tie = 0
    for i in range(ncand):
        if cand_val[i] != top:
            continue
        st.nodes += 1
        if st.nodes > CANON_NODE_BUDGET:
            return 1
        v = cand_v[i]
        st.placed[p] = v
        st.cols[p] = top
        rc = _canon_dfs(st, p + 1, used | (1 << v), tie)
        if rc:
            return rc
    return 0


def canonical_rows(int n, rows):
    if n > 16:
        raise ValueError(f"exact canonicalizer capped at 16 vertices, got {n}")
    if n <= 1:
        return tuple(rows)
    parts = _pure._complete_multipartite_parts(n, rows)
    if parts is not None:
        return _pure._multipartite_rows(parts)

    cdef uint16_t r[16]
    cdef int color[16]
    cdef int class_of_pos[16]
    cdef uint16_t best[16]
    cdef uint16_t cols[16]
    cdef int placed[16]
    cdef int order[16]
    cdef int i, j, v
    for i in range(n):
        r[i] = <uint16_t> rows[i]
    _refine(n, r, color)
    # positions list refinement classes in canonical order, index-sorted
    # within a class (insertion sort on (color, v))
    for i in range(n):
        order[i] = i
    for i in range(1, n):
        v = order[i]
        j = i - 1
        while j >= 0 and (color[order[j]] > color[v] or
                          (color[order[j]] == color[v] and order[j] > v)):
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = v
    for i in range(n):
        class_of_pos[i] = color[order[i]]

    cdef CState st
    st.n = n
    st.rows = r
    st.color = color
    st.class_of_pos = class_of_pos
    st.best = best
    st.have_best = 0
    st.cols = cols
    st.placed = placed
    st.nodes = 0
    if _canon_dfs(&st, 0, 0, 1):
        raise CanonicalizationError(
            f"canonicalization node budget exceeded at n={n}")

    out = [0] * n
    cdef int cj
    for j in range(1, n):
        cj = best[j]
        for i in range(j):
            if (cj >> (j - 1 - i)) & 1:
                out[i] |= 1 << j
                out[j] |= 1 << i
    return tuple(out)


# ---------------------------------------------------------------------------
# Exact-length cycle search
# ---------------------------------------------------------------------------

def cycle_search(int n, rows, int length, long long budget):
    if n > 64:
        return _pure.cycle_search(n, rows, length, budget)

    cdef uint64_t r[64]
    cdef int degs[64]
    cdef int starts[64]
    cdef int dist0[64]
    cdef int dist1[64]
    cdef int frontier[64]
    cdef int nxt_frontier[64]
    cdef uint64_t cand[65]
    cdef int path[65]
    cdef int i, j, v, u, s, d, p, nf, nn, depth, rem, par
    cdef uint64_t allowed, allowed_s, m, b, first, ok0, nxt, filt, bb, visited
    cdef int64_t expansions = 0
    cdef int inf = 4 * n + 8

    for i in range(n):
        r[i] = <uint64_t> rows[i]
        degs[i] = __builtin_popcountll(r[i])
    for i in range(n):
        starts[i] = i
    for i in range(1, n):
        v = starts[i]
        j = i - 1
        while j >= 0 and (degs[starts[j]] > degs[v] or
                          (degs[starts[j]] == degs[v] and starts[j] > v)):
            starts[j + 1] = starts[j]
            j -= 1
        starts[j + 1] = v

    for i in range(n):
        s = starts[i]
        if degs[s] < 2:
            continue
        allowed = 0
        for v in range(s + 1, n):
            allowed |= (<uint64_t> 1) << v
        allowed_s = allowed | ((<uint64_t> 1) << s)
        if __builtin_popcountll(allowed_s) < length:
            continue
        # parity BFS from s inside allowed_s
        for v in range(n):
            dist0[v] = inf
            dist1[v] = inf
        dist0[s] = 0
        frontier[0] = s
        nf = 1
        d = 0
        while nf > 0 and d <= 2 * n + 2:
            d += 1
            p = d & 1
            nn = 0
            for j in range(nf):
                v = frontier[j]
                m = r[v] & allowed_s
                while m:
                    b = m & (~m + 1)
                    u = __builtin_ctzll(b)
                    m ^= b
                    if p:
                        if dist1[u] > d:
                            dist1[u] = d
                            nxt_frontier[nn] = u
                            nn += 1
                    else:
                        if dist0[u] > d:
                            dist0[u] = d
                            nxt_frontier[nn] = u
                            nn += 1
            for j in range(nn):
                frontier[j] = nxt_frontier[j]
            nf = nn

        first = r[s] & allowed
        rem = length - 1
        par = rem & 1
        ok0 = 0
        m = first
        while m:
            b = m & (~m + 1)
            v = __builtin_ctzll(b)
            m ^= b
            if (dist1[v] if par else dist0[v]) <= rem:
                ok0 |= b
        if ok0 == 0:
            continue

        path[0] = s
        visited = (<uint64_t> 1) << s
        depth = 1
        cand[1] = ok0
        while depth >= 1:
            if cand[depth] == 0:
                depth -= 1
                if depth >= 1:
                    visited &= ~((<uint64_t> 1) << path[depth])
                continue
            b = cand[depth] & (~cand[depth] + 1)
            cand[depth] ^= b
            v = __builtin_ctzll(b)
            expansions += 1
            if expansions >= budget:
                return (UNKNOWN, None, expansions)
            if depth == length - 1:
                wit = tuple(path[j] for j in range(depth)) + (v,)
                return (PRESENT, wit, expansions)
            path[depth] = v
            visited |= b
            nxt = r[v] & allowed & ~visited
            rem = length - depth - 1
            if depth + 1 == length - 1:
                nxt &= r[s]
            par = rem & 1
            filt = 0
            m = nxt
            while m:
                bb = m & (~m + 1)
                u = __builtin_ctzll(bb)
                m ^= bb
                if (dist1[u] if par else dist0[u]) <= rem:
                    filt |= bb
            depth += 1
            cand[depth] = filt
    return (ABSENT, None, expansions)
