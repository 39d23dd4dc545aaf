"""Exact maximum average degree, degree peeling, cut-vertex reduction,
and closed-form edge-count threshold checks.

mad(G) = max over nonempty S of 2 e(S)/|S| is computed exactly: a
Dinkelbach-style search over candidate densities (all of which are
fractions with denominator at most n) where each candidacy test is one
integer max-flow, plus a simplest-fraction-in-interval step that proves
termination once no candidate remains between the attained value and the
certified upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cycles import cut_vertices
from .graphs import Graph, bits


@dataclass(frozen=True)
class DensityWitness:
    """Exact mad value together with a subset attaining it."""

    mad: Fraction
    subset: tuple[int, ...]


@dataclass(frozen=True)
class PeelResult:
    subgraph: Graph | None
    kept: tuple[int, ...]
    log: tuple[tuple[int, int], ...]  # (vertex, degree at removal)


@dataclass(frozen=True)
class ReductionResult:
    subgraph: Graph | None
    kept: tuple[int, ...]
    deleted: tuple[int, ...]


# ---------------------------------------------------------------------------
# Integer max-flow (Dinic)
# ---------------------------------------------------------------------------


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, cap: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for v in queue:
                for e in self.head[v]:
                    if self.cap[e] > 0 and level[self.to[e]] < 0:
                        level[self.to[e]] = level[v] + 1
                        queue.append(self.to[e])
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(v: int, pushed: int) -> int:
                if v == t:
                    return pushed
                while it[v] < len(self.head[v]):
                    e = self.head[v][it[v]]
                    u = self.to[e]
                    if self.cap[e] > 0 and level[u] == level[v] + 1:
                        d = dfs(u, min(pushed, self.cap[e]))
                        if d > 0:
                            self.cap[e] -= d
                            self.cap[e ^ 1] += d
                            return d
                    it[v] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 62)
                if pushed == 0:
                    break
                flow += pushed

    def source_side(self, s: int) -> set[int]:
        seen = {s}
        queue = [s]
        for v in queue:
            for e in self.head[v]:
                if self.cap[e] > 0 and self.to[e] not in seen:
                    seen.add(self.to[e])
                    queue.append(self.to[e])
        return seen


# ---------------------------------------------------------------------------
# Maximum average degree
# ---------------------------------------------------------------------------


def _denser_subset(g: Graph, gamma: Fraction) -> tuple[int, ...] | None:
    """A vertex set with e(S)/|S| > gamma, or None when gamma is already
    an upper bound.  One max-flow with capacities scaled by gamma's
    denominator, so the strict test is exact."""
    p, q = gamma.numerator, gamma.denominator
    n = g.n
    m = g.edge_count
    net = _Dinic(n + 2)
    s, t = n, n + 1
    for v in range(n):
        net.add_edge(s, v, q * g.degree(v))
        net.add_edge(v, t, 2 * p)
    for u, v in g.edges():
        net.add_edge(u, v, q)
        net.add_edge(v, u, q)
    cut = net.max_flow(s, t)
    if cut >= 2 * m * q:
        return None
    side = net.source_side(s)
    subset = tuple(sorted(v for v in side if v < n))
    assert subset
    return subset


def _subset_density(g: Graph, subset: tuple[int, ...]) -> Fraction:
    mask = 0
    for v in subset:
        mask |= 1 << v
    e = sum((g.rows[v] & mask).bit_count() for v in subset) // 2
    return Fraction(e, len(subset))


def simplest_in_open(a: Fraction, b: Fraction) -> Fraction:
    """The smallest-denominator fraction strictly between a and b."""
    if a >= b:
        raise ValueError("empty interval")
    i = a.numerator // a.denominator
    if Fraction(i + 1) < b:
        return Fraction(i + 1)
    a2 = a - i
    b2 = b - i
    if a2 == 0:
        m = (Fraction(1) / b2).numerator // (Fraction(1) / b2).denominator + 1
        return i + Fraction(1, m)
    inner = simplest_in_open(Fraction(1) / b2, Fraction(1) / a2)
    return i + 1 / inner


def mad(g: Graph) -> DensityWitness:
    """Exact maximum average degree with an attaining subset."""
    if g.edge_count == 0:
        raise ValueError("mad is undefined on an empty graph")
    n = g.n
    lo = _subset_density(g, tuple(range(n)))
    best_set = tuple(range(n))
    first_edge = next(g.edges())
    if Fraction(1, 2) > lo:
        lo, best_set = Fraction(1, 2), tuple(sorted(first_edge))
    hi = Fraction(n - 1, 2)  # density of a complete graph; global maximum
    while lo < hi:
        probe = simplest_in_open(lo, hi)
        if probe.denominator > n:
            better = _denser_subset(g, lo)
            if better is None:
                break
            best_set = better
            lo = _subset_density(g, better)
            continue
        better = _denser_subset(g, probe)
        if better is None:
            hi = probe
        else:
            best_set = better
            lo = _subset_density(g, better)
    return DensityWitness(mad=2 * lo, subset=best_set)


def critical_subset(g: Graph) -> tuple[int, ...]:
    """A vertex set whose induced average degree equals mad(G)."""
    return mad(g).subset


# ---------------------------------------------------------------------------
# Peeling and cut-vertex reduction
# ---------------------------------------------------------------------------


def peel_to_min_degree(g: Graph, threshold) -> PeelResult:
    """Iteratively delete the lowest-index vertex of degree < threshold;
    the survivor is the unique maximal subgraph with min degree >=
    threshold, and the log replays every removal with its degree."""
    thr = Fraction(threshold)
    if thr < 0:
        raise ValueError("threshold must be nonnegative")
    alive = list(range(g.n))
    rows = list(g.rows)
    log = []
    changed = True
    while changed and alive:
        changed = False
        for v in alive:
            deg = rows[v].bit_count()
            if Fraction(deg) < thr:
                log.append((v, deg))
                for u in bits(rows[v]):
                    rows[u] &= ~(1 << v)
                rows[v] = 0
                alive.remove(v)
                changed = True
                break
    kept = tuple(alive)
    if not kept:
        return PeelResult(None, (), tuple(log))
    sub, _ = g.induced(kept)
    return PeelResult(sub, kept, tuple(log))


def biconnected_reduction(g: Graph) -> ReductionResult:
    """Delete cut vertices one at a time (smallest original index first)
    until no component has an articulation point."""
    kept = tuple(range(g.n))
    cur = g
    deleted: list[int] = []
    while True:
        cvs = cut_vertices(cur)
        if not cvs:
            break
        victim_local = cvs[0]
        victim = kept[victim_local]
        deleted.append(victim)
        remaining = tuple(v for v in kept if v != victim)
        if not remaining:
            return ReductionResult(None, (), tuple(deleted))
        cur, _ = g.induced(remaining)
        kept = remaining
    return ReductionResult(cur, kept, tuple(deleted))


# ---------------------------------------------------------------------------
# Edge-count thresholds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeBoundReport:
    """Which side of each closed-form edge threshold the graph lies on."""

    n: int
    e: int
    k: int
    mantel_bound: int
    within_mantel: bool
    mantel_tight: bool
    erdos_nonbipartite_bound: int
    within_erdos: bool
    short_odd_free_bound: int
    exceeds_short_odd_free: bool
    extremal_edge_floor: Fraction
    meets_extremal_floor: bool


def edge_bound_checks(g: Graph, k: int) -> EdgeBoundReport:
    if k < 1:
        raise ValueError("k must be >= 1")
    n, e = g.n, g.edge_count
    mantel = n * n // 4
    erdos = (n - 1) * (n - 1) // 4 + 1
    short_free = (n - 2 * k + 1) ** 2 // 4 + 2 * k - 1 if n >= 2 * k - 1 else 0
    floor_val = Fraction(n * n, 4) - k * n + k
    return EdgeBoundReport(
        n=n,
        e=e,
        k=k,
        mantel_bound=mantel,
        within_mantel=e <= mantel,
        mantel_tight=e == mantel,
        erdos_nonbipartite_bound=erdos,
        within_erdos=e <= erdos,
        short_odd_free_bound=short_free,
        exceeds_short_odd_free=e > short_free,
        extremal_edge_floor=floor_val,
        meets_extremal_floor=Fraction(e) >= floor_val,
    )
