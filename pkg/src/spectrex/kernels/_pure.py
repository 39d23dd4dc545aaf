"""Pure-Python implementations of the hot kernels.

Reference semantics for the compiled backend: both backends must return
bit-identical results (canonical labelings, witnesses, expansion counts)
so that reports are byte-stable regardless of which backend is loaded.

Adjacency is passed as a tuple of integer bitsets, row ``v`` having bit
``u`` set iff ``uv`` is an edge.
"""

from __future__ import annotations

BACKEND_NAME = "pure"

#: Search-tree node budget for the exact canonicalizer.
CANON_NODE_BUDGET = 5_000_000


class CanonicalizationError(Exception):
    """Raised when the exact canonicalizer exceeds its node budget."""


# ---------------------------------------------------------------------------
# Canonical labeling (exact, n <= 16)
# ---------------------------------------------------------------------------


def _refine_colors(n: int, rows: tuple[int, ...]) -> list[int]:
    """Stable vertex coloring: degree-descending start, then iterated
    neighborhood refinement.  Color ids are ranks of packed signatures,
    so they are isomorphism-invariant and identical across backends."""
    degs = [rows[v].bit_count() for v in range(n)]
    uniq_desc = sorted(set(degs), reverse=True)
    rank = {d: i for i, d in enumerate(uniq_desc)}
    color = [rank[d] for d in degs]
    while True:
        sigs = []
        for v in range(n):
            nb = []
            m = rows[v]
            while m:
                b = m & -m
                nb.append(color[b.bit_length() - 1])
                m ^= b
            nb.sort(reverse=True)
            # pack: color in the top nibble, neighbor colors (descending)
            # in the next nibbles, zero-padded at the low end
            sig = color[v]
            for i in range(15):
                sig = (sig << 4) | (nb[i] if i < len(nb) else 0)
            sigs.append(sig)
        uniq = sorted(set(sigs))
        srank = {s: i for i, s in enumerate(uniq)}
        new = [srank[s] for s in sigs]
        if new == color:
            return color
        color = new


def _complete_multipartite_parts(n: int, rows: tuple[int, ...]) -> list[list[int]] | None:
    """Return the parts if the graph is complete multipartite, else None.

    The complement of a complete multipartite graph is a disjoint union
    of cliques; this covers the highly symmetric inputs (empty, complete,
    complete bipartite, balanced Turán graphs) for which the generic
    branch-and-bound would blow up.
    """
    full = (1 << n) - 1
    comp = [(~rows[v]) & full & ~(1 << v) for v in range(n)]
    seen = 0
    parts = []
    for v in range(n):
        if (seen >> v) & 1:
            continue
        # component of v in the complement
        frontier = 1 << v
        members = 0
        while frontier:
            members |= frontier
            nxt = 0
            m = frontier
            while m:
                b = m & -m
                nxt |= comp[b.bit_length() - 1]
                m ^= b
            frontier = nxt & ~members
        # the component must be a clique of the complement
        m = members
        while m:
            b = m & -m
            u = b.bit_length() - 1
            if comp[u] & members != members & ~(1 << u):
                return None
            m ^= b
        seen |= members
        part = []
        m = members
        while m:
            b = m & -m
            part.append(b.bit_length() - 1)
            m ^= b
        parts.append(part)
    return parts


def _multipartite_rows(parts: list[list[int]]) -> tuple[int, ...]:
    sizes = sorted((len(p) for p in parts), reverse=True)
    n = sum(sizes)
    rows = []
    offset = 0
    full = (1 << n) - 1
    for s in sizes:
        block = ((1 << s) - 1) << offset
        for _ in range(s):
            rows.append(full & ~block)
        offset += s
    return tuple(rows)


def canonical_rows(n: int, rows: tuple[int, ...]) -> tuple[int, ...]:
    """Exact canonical relabeling: the adjacency whose column encoding is
    lexicographically maximal over all permutations that list refinement
    classes in canonical order.  Output rows are equal iff inputs are
    isomorphic.  Capped at n <= 16."""
    if n > 16:
        raise ValueError(f"exact canonicalizer capped at 16 vertices, got {n}")
    if n <= 1:
        return tuple(rows)
    parts = _complete_multipartite_parts(n, rows)
    if parts is not None:
        return _multipartite_rows(parts)

    color = _refine_colors(n, rows)
    # position p is filled from the class class_of_pos[p]
    order = sorted(range(n), key=lambda v: (color[v], v))
    class_of_pos = [color[v] for v in order]

    best: list[int] | None = None
    placed = [0] * n
    cols = [0] * n
    nodes = 0

    def dfs(p: int, used: int, tie_with_best: bool) -> None:
        nonlocal best, nodes
        if p == n:
            if best is None or cols > best:
                best = cols.copy()
            return
        want = class_of_pos[p]
        # column value of each candidate: adjacency bits to placed
        # positions, earlier positions more significant
        cand_vals = []
        for v in range(n):
            if (used >> v) & 1 or color[v] != want:
                continue
            val = 0
            rv = rows[v]
            for i in range(p):
                val = (val << 1) | ((rv >> placed[i]) & 1)
            cand_vals.append((val, v))
        if not cand_vals:
            return
        top = max(val for val, _ in cand_vals)
        if tie_with_best and best is not None:
            if top < best[p]:
                return
            if top > best[p]:
                tie_with_best = False
        for val, v in cand_vals:
            if val != top:
                continue
            nodes += 1
            if nodes > CANON_NODE_BUDGET:
                raise CanonicalizationError(
                    f"canonicalization node budget exceeded at n={n}"
                )
            placed[p] = v
            cols[p] = val
            dfs(p + 1, used | (1 << v), tie_with_best)
        # restore not needed: cols/placed overwritten on next use

    dfs(0, 0, True)
    assert best is not None
    # rebuild rows from the winning columns
    out = [0] * n
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

PRESENT = 1
ABSENT = 0
UNKNOWN = -1


def _parity_dists(n: int, rows: tuple[int, ...], s: int, allowed: int) -> list[list[int]]:
    """Shortest even/odd walk lengths from s inside the allowed vertex set
    (BFS on the bipartite double cover).  dist[p][v] = min length of an
    s-v walk of parity p, or a large sentinel."""
    inf = 4 * n + 8
    dist = [[inf] * n for _ in range(2)]
    dist[0][s] = 0
    frontier = [(s, 0)]
    d = 0
    while frontier:
        nxt = []
        d += 1
        p = d & 1
        for v, _ in frontier:
            m = rows[v] & allowed
            while m:
                b = m & -m
                u = b.bit_length() - 1
                m ^= b
                if dist[p][u] > d:
                    dist[p][u] = d
                    nxt.append((u, p))
        frontier = nxt
        if d > 2 * n + 2:
            break
    return dist


def cycle_search(
    n: int, rows: tuple[int, ...], length: int, budget: int
) -> tuple[int, tuple[int, ...] | None, int]:
    """Search for a simple cycle of exactly ``length`` vertices.

    Start vertices are visited in increasing-degree order; from a start s
    only vertices with index > s are used, so every cycle is found from
    its minimum vertex exactly once.  Returns (status, witness, expansions)
    where status is PRESENT/ABSENT/UNKNOWN and the budget counts vertex
    placements.
    """
    degs = [rows[v].bit_count() for v in range(n)]
    starts = sorted(range(n), key=lambda v: (degs[v], v))
    expansions = 0
    for s in starts:
        if degs[s] < 2:
            continue
        allowed = 0
        for v in range(s + 1, n):
            allowed |= 1 << v
        allowed_s = allowed | (1 << s)
        if (allowed_s.bit_count()) < length:
            continue
        dist = _parity_dists(n, rows, s, allowed_s)
        # quick reject: no closing walk of the right parity exists at all
        first = rows[s] & allowed
        rem0 = length - 1
        ok0 = 0
        m = first
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            if dist[rem0 & 1][v] <= rem0:
                ok0 |= b
        if not ok0:
            continue
        # iterative DFS: path[i] at depth i, cand[i] = remaining candidates
        path = [0] * length
        cand = [0] * length
        path[0] = s
        visited = 1 << s
        depth = 1
        cand[1] = ok0
        while depth >= 1:
            if cand[depth] == 0:
                depth -= 1
                if depth >= 1:
                    visited &= ~(1 << path[depth])
                continue
            b = cand[depth] & -cand[depth]
            cand[depth] ^= b
            v = b.bit_length() - 1
            expansions += 1
            if expansions >= budget:
                return (UNKNOWN, None, expansions)
            if depth == length - 1:
                return (PRESENT, tuple(path[:depth]) + (v,), expansions)
            path[depth] = v
            visited |= b
            nxt = rows[v] & allowed & ~visited
            rem = length - depth - 1
            if depth + 1 == length - 1:
                nxt &= rows[s]
            filt = 0
            m = nxt
            par = rem & 1
            dp = dist[par]
            while m:
                bb = m & -m
                u = bb.bit_length() - 1
                m ^= bb
                if dp[u] <= rem:
                    filt |= bb
            depth += 1
            cand[depth] = filt
        # exhausted this start completely
    return (ABSENT, None, expansions)
