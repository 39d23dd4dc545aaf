"""Cycle structure: girth, odd girth, per-length existence, cycle
spectrum, circumference and longest even/odd cycles, forbidden-family
checks, and articulation points.

Exact-length existence is decided by budgeted backtracking (bitset
pruning plus parity-aware distance bounds); a completed search is the
only way to report absence, and budget exhaustion is reported as
``unknown`` rather than silently truncated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import kernels
from .graphs import Graph, bits, is_bipartite

DEFAULT_BUDGET = 10_000_000

PRESENT = "present"
ABSENT = "absent"
UNKNOWN = "unknown"


class BudgetError(RuntimeError):
    """A verification-grade check needed a completed search but the
    node-expansion budget ran out."""


@dataclass(frozen=True)
class LengthStatus:
    status: str
    witness: tuple[int, ...] | None = None

    @property
    def present(self) -> bool:
        return self.status == PRESENT


@dataclass(frozen=True)
class ExtremalLength:
    """Longest-cycle style answer: exact value, or best-found lower bound
    when some longer searches were budget-truncated."""

    value: int | None
    exact: bool


@dataclass(frozen=True)
class CycleSpectrum:
    n: int
    presence: dict  # length -> LengthStatus, for 3..n
    girth: int | None
    odd_girth: int | None
    circumference: ExtremalLength
    longest_even: ExtremalLength
    longest_odd: ExtremalLength

    def lengths_present(self) -> tuple[int, ...]:
        return tuple(
            length
            for length in sorted(self.presence)
            if self.presence[length].present
        )

    def to_lines(self) -> list[str]:
        out = []
        for length in sorted(self.presence):
            st = self.presence[length]
            line = f"L={length} status={st.status}"
            if st.witness:
                line += " witness=" + "-".join(str(v) for v in st.witness)
            out.append(line)
        return out


def _canonical_cycle(witness: tuple[int, ...]) -> tuple[int, ...]:
    """Rotate to the smallest vertex and pick the lexicographically
    smaller direction, for stable golden files."""
    k = len(witness)
    i = witness.index(min(witness))
    fwd = tuple(witness[(i + j) % k] for j in range(k))
    rev = tuple(witness[(i - j) % k] for j in range(k))
    return min(fwd, rev)


def _validate_cycle(g: Graph, witness: tuple[int, ...], length: int) -> None:
    if len(witness) != length or len(set(witness)) != length:
        raise AssertionError(f"bad cycle witness {witness}")
    for a, b in zip(witness, witness[1:] + witness[:1]):
        if not g.has_edge(a, b):
            raise AssertionError(f"witness edge {a}-{b} missing")


def contains_cycle_of_length(
    g: Graph, length: int, budget: int = DEFAULT_BUDGET
) -> LengthStatus:
    """Exact-length simple-cycle existence; ``absent`` only when the
    backtracking search ran to completion within ``budget`` expansions."""
    if not 3 <= length <= g.n:
        raise ValueError(f"cycle length {length} outside 3..{g.n}")
    status, witness, _ = kernels.cycle_search(g.n, g.rows, length, max(1, budget))
    if status == kernels.PRESENT:
        assert witness is not None
        wit = _canonical_cycle(witness)
        _validate_cycle(g, wit, length)
        return LengthStatus(PRESENT, wit)
    if status == kernels.ABSENT:
        return LengthStatus(ABSENT)
    return LengthStatus(UNKNOWN)


def shortest_odd_cycle(
    g: Graph, budget: int = DEFAULT_BUDGET
) -> tuple[int, ...] | None:
    """A shortest odd cycle, or None iff the graph is bipartite.

    The odd girth is computed exactly by a BFS layer sweep from every
    vertex (a same-layer edge at depth d closes an odd walk of length
    2d+1, and the minimum over roots and edges is the odd girth); the
    witness is then extracted by an exact-length search.
    """
    best = None
    for root in range(g.n):
        dist = {root: 0}
        frontier = [root]
        d = 0
        while frontier:
            nxt = []
            d += 1
            if best is not None and 2 * d - 1 >= best:
                break
            for v in frontier:
                for u in bits(g.rows[v]):
                    if u not in dist:
                        dist[u] = d
                        nxt.append(u)
            frontier = nxt
        for v, dv in dist.items():
            for u in bits(g.rows[v]):
                du = dist.get(u)
                if du == dv:
                    cand = 2 * dv + 1
                    if best is None or cand < best:
                        best = cand
    if best is None:
        return None
    status = contains_cycle_of_length(g, best, budget)
    if status.status != PRESENT:
        raise BudgetError(f"failed to extract an odd cycle of length {best}")
    return status.witness


def cycle_spectrum(
    g: Graph, budget: int = DEFAULT_BUDGET, lengths: Iterable[int] | None = None
) -> CycleSpectrum:
    """Per-length presence plus girth / odd girth / circumference /
    longest even and odd cycle summaries; the budget applies per length."""
    wanted = sorted(lengths) if lengths is not None else list(range(3, g.n + 1))
    presence = {}
    for length in wanted:
        presence[length] = contains_cycle_of_length(g, length, budget)
    return _assemble_spectrum(g.n, presence)


def _assemble_spectrum(n: int, presence: dict) -> CycleSpectrum:
    lengths = sorted(presence)
    girth = None
    for length in lengths:
        st = presence[length]
        if st.status == UNKNOWN:
            break
        if st.present:
            girth = length
            break
    odd_girth = None
    for length in lengths:
        if length % 2 == 0:
            continue
        st = presence[length]
        if st.status == UNKNOWN:
            break
        if st.present:
            odd_girth = length
            break

    def longest(parity: int | None) -> ExtremalLength:
        best = None
        exact = True
        for length in lengths:
            if parity is not None and length % 2 != parity:
                continue
            st = presence[length]
            if st.present:
                best = length
        for length in lengths:
            if parity is not None and length % 2 != parity:
                continue
            if best is not None and length <= best:
                continue
            if presence[length].status == UNKNOWN:
                exact = False
        return ExtremalLength(best, exact)

    return CycleSpectrum(
        n=n,
        presence=presence,
        girth=girth,
        odd_girth=odd_girth,
        circumference=longest(None),
        longest_even=longest(0),
        longest_odd=longest(1),
    )


def extremal_cycle_lengths(
    g: Graph, budget: int = DEFAULT_BUDGET
) -> tuple[ExtremalLength, ExtremalLength, ExtremalLength]:
    """(circumference, longest even, longest odd) statuses."""
    spec = cycle_spectrum(g, budget)
    return spec.circumference, spec.longest_even, spec.longest_odd


def forbidden_lengths(l: int, k: int) -> tuple[int, ...]:
    """Odd lengths excluded by the (l, k) family: 3, 5, ..., 2l-1 and
    2k+1."""
    if not 1 <= l <= k:
        raise ValueError(f"need 1 <= l <= k, got l={l}, k={k}")
    return tuple(range(3, 2 * l, 2)) + (2 * k + 1,)


def is_family_free(
    g: Graph, l: int, k: int, budget: int = DEFAULT_BUDGET
) -> tuple[bool, tuple[int, ...] | None]:
    """True iff none of the forbidden odd cycles occurs; on False the
    first witness cycle is returned.  Every needed per-length search must
    complete, otherwise BudgetError."""
    for length in forbidden_lengths(l, k):
        if length > g.n:
            continue
        st = contains_cycle_of_length(g, length, budget)
        if st.status == UNKNOWN:
            raise BudgetError(
                f"length-{length} search exhausted its budget of {budget}"
            )
        if st.present:
            return False, st.witness
    return True, None


def contains_path_of_length(
    g: Graph,
    a: int,
    b: int,
    length: int,
    budget: int = DEFAULT_BUDGET,
    forbidden: tuple[int, ...] = (),
) -> tuple[int, ...] | None:
    """A simple a-b path with exactly ``length`` edges avoiding the
    forbidden vertices, or None when the completed search finds none."""
    if a == b or length < 1:
        raise ValueError("need distinct endpoints and length >= 1")
    blocked = 0
    for v in forbidden:
        blocked |= 1 << v
    if (blocked >> a) & 1 or (blocked >> b) & 1:
        raise ValueError("endpoints may not be forbidden")
    allowed = ((1 << g.n) - 1) & ~blocked
    # parity distances from b for pruning
    inf = 4 * g.n + 8
    dist = [[inf] * g.n for _ in range(2)]
    dist[0][b] = 0
    frontier = [b]
    d = 0
    while frontier:
        nxt = []
        d += 1
        p = d & 1
        for v in frontier:
            for u in bits(g.rows[v] & allowed):
                if dist[p][u] > d:
                    dist[p][u] = d
                    nxt.append(u)
        frontier = nxt
        if d > 2 * g.n + 2:
            break
    if length == 1:
        return (a, b) if g.has_edge(a, b) else None
    path = [0] * length
    path[0] = a
    visited = 1 << a
    expansions = 0
    cand = [0] * (length + 1)
    first = 0
    for u in bits(g.rows[a] & allowed & ~(1 << b)):
        if dist[(length - 1) & 1][u] <= length - 1:
            first |= 1 << u
    cand[1] = first
    depth = 1
    while depth >= 1:
        if cand[depth] == 0:
            depth -= 1
            if depth >= 1:
                visited &= ~(1 << path[depth])
            continue
        bset = cand[depth] & -cand[depth]
        cand[depth] ^= bset
        v = bset.bit_length() - 1
        expansions += 1
        if expansions >= budget:
            raise BudgetError(f"path search exhausted its budget of {budget}")
        if depth == length - 1:
            if g.has_edge(v, b):
                return tuple(path[:depth]) + (v, b)
            continue
        path[depth] = v
        visited |= bset
        rem = length - depth - 1
        nxt = g.rows[v] & allowed & ~visited & ~(1 << b)
        filt = 0
        for u in bits(nxt):
            if dist[rem & 1][u] <= rem:
                filt |= 1 << u
        depth += 1
        cand[depth] = filt
    return None


def cut_vertices(g: Graph) -> tuple[int, ...]:
    """Articulation points via one iterative low-link DFS."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    out = set()
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        stack = [(root, iter(bits(g.rows[root])))]
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if disc[u] == -1:
                    parent[u] = v
                    if v == root:
                        root_children += 1
                    disc[u] = low[u] = timer
                    timer += 1
                    stack.append((u, iter(bits(g.rows[u]))))
                    advanced = True
                    break
                elif u != parent[v]:
                    if disc[u] < low[v]:
                        low[v] = disc[u]
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if p != root and low[v] >= disc[p]:
                        out.add(p)
        if root_children >= 2:
            out.add(root)
    return tuple(sorted(out))
