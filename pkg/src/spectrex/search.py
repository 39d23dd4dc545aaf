"""Non-isomorphic graph enumeration, constrained extremal scans over the
spectral radius, and certificate-driven local search.

Enumeration extends each (n-1)-vertex class by one vertex over all 2^(n-1)
attachment sets and dedups by the exact canonical form, so every
isomorphism class is produced exactly once; levels are cached and streamed
in canonical byte order for deterministic reports.  Scans certify every
passing graph with exact rational Collatz-Wielandt intervals and escalate
to the characteristic-polynomial oracle when the leaders overlap.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from . import kernels
from .cycles import (
    BudgetError,
    DEFAULT_BUDGET,
    contains_cycle_of_length,
    forbidden_lengths,
)
from .graphs import Graph, decode_graph6, encode_graph6, is_bipartite
from .report import fmt_float, fmt_rational
from .spectral import (
    EXACT_MAX_N,
    PerronCertificate,
    UndecidedError,
    char_poly,
    perron,
    refine_certificate,
)

ENUM_MAX_N = 9

_LEVEL_CACHE: dict[int, tuple[bytes, ...]] = {}


class ScanAborted(RuntimeError):
    """A scan-required cycle search exhausted its budget; carries the
    offending graph."""

    def __init__(self, key: bytes, length: int):
        super().__init__(
            f"cycle search (length {length}) exhausted its budget on {key.decode()}"
        )
        self.graph6 = key
        self.length = length


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _extend_parents(args: tuple[list[bytes], int]) -> set[bytes]:
    parent_keys, n = args
    out: set[bytes] = set()
    for key in parent_keys:
        parent = decode_graph6(key)
        prows = parent.rows
        top = 1 << (n - 1)
        for mask in range(1 << (n - 1)):
            rows = list(prows) + [mask]
            for j in range(n - 1):
                if (mask >> j) & 1:
                    rows[j] |= top
            canon = kernels.canonical_rows(n, tuple(rows))
            out.add(encode_graph6(Graph(n, canon)))
    return out


def _level_keys(n: int, workers: int = 1) -> tuple[bytes, ...]:
    if n in _LEVEL_CACHE:
        return _LEVEL_CACHE[n]
    if n == 1:
        keys: tuple[bytes, ...] = (encode_graph6(Graph(1, (0,))),)
    else:
        parents = list(_level_keys(n - 1, workers))
        if workers > 1 and len(parents) >= workers:
            chunk = (len(parents) + 4 * workers - 1) // (4 * workers)
            jobs = [
                (parents[i : i + chunk], n) for i in range(0, len(parents), chunk)
            ]
            merged: set[bytes] = set()
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for part in pool.map(_extend_parents, jobs):
                    merged |= part
            keys = tuple(sorted(merged))
        else:
            keys = tuple(sorted(_extend_parents((parents, n))))
    _LEVEL_CACHE[n] = keys
    return keys


def enumerate_graphs(
    n: int, connected_only: bool = False, workers: int = 1
) -> Iterator[Graph]:
    """Every isomorphism class on n vertices exactly once, in canonical
    byte order.  Built-in enumeration caps at n = 9; larger universes
    come from graph6 ingestion."""
    if not 1 <= n <= ENUM_MAX_N:
        raise ValueError(f"built-in enumeration caps at {ENUM_MAX_N}, got n={n}")
    for key in _level_keys(n, workers):
        g = decode_graph6(key)
        if connected_only and not g.is_connected():
            continue
        yield g


def count_graphs(n: int, connected_only: bool = False, workers: int = 1) -> int:
    return sum(1 for _ in enumerate_graphs(n, connected_only, workers))


# ---------------------------------------------------------------------------
# Constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintSet:
    """Scan filter: forbidden odd cycle lengths plus structural flags."""

    n: int
    forbid_odd_lengths: tuple[int, ...] = ()
    require_nonbipartite: bool = True
    require_connected: bool = False
    l: int | None = None
    k: int | None = None

    def __post_init__(self):
        for length in self.forbid_odd_lengths:
            if length % 2 == 0 or length < 3 or length > self.n:
                raise ValueError(
                    f"forbidden length {length} must be odd, >=3 and <= n"
                )

    @staticmethod
    def for_family(
        n: int,
        l: int,
        k: int,
        require_nonbipartite: bool = True,
        require_connected: bool = False,
    ) -> "ConstraintSet":
        lengths = tuple(x for x in forbidden_lengths(l, k) if x <= n)
        return ConstraintSet(
            n=n,
            forbid_odd_lengths=lengths,
            require_nonbipartite=require_nonbipartite,
            require_connected=require_connected,
            l=l,
            k=k,
        )

    def to_report(self) -> dict:
        out = {
            "n": self.n,
            "forbid_odd_lengths": list(self.forbid_odd_lengths),
            "require_nonbipartite": self.require_nonbipartite,
            "require_connected": self.require_connected,
        }
        if self.l is not None:
            out["l"] = self.l
        if self.k is not None:
            out["k"] = self.k
        return out


def graph_passes(g: Graph, cs: ConstraintSet, budget: int = DEFAULT_BUDGET) -> bool:
    """Filter evaluation; every forbidden-length search must complete."""
    if g.n != cs.n:
        return False
    if cs.require_connected and not g.is_connected():
        return False
    if cs.require_nonbipartite and is_bipartite(g) is not None:
        return False
    for length in cs.forbid_odd_lengths:
        st = contains_cycle_of_length(g, length, budget)
        if st.status == "unknown":
            raise ScanAborted(encode_graph6(g), length)
        if st.present:
            return False
    return True


# ---------------------------------------------------------------------------
# Extremal scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchReport:
    constraints: ConstraintSet
    mode: str
    best: tuple[tuple[str, PerronCertificate], ...]
    runner_up_gap: Fraction | None
    enumerated: int
    passed: int
    stream_digest: str | None = None
    notes: tuple[str, ...] = ()

    def to_payload(self) -> dict:
        return {
            "kind": "scan",
            "constraints": self.constraints.to_report(),
            "mode": self.mode,
            "best": [
                {"graph6": key, **cert.to_report()} for key, cert in self.best
            ],
            "runner_up_gap": (
                fmt_rational(self.runner_up_gap)
                if self.runner_up_gap is not None
                else None
            ),
            "counts": {"enumerated": self.enumerated, "passed": self.passed},
            "stream_digest": self.stream_digest,
            "notes": list(self.notes),
        }

    def csv_rows(self, limit: int = 25) -> list[str]:
        rows = ["rank,graph6,lambda_lo,lambda_hi"]
        for rank, (key, cert) in enumerate(self.best[:limit], start=1):
            rows.append(
                f"{rank},{key},{fmt_float(cert.lambda_lo)},{fmt_float(cert.lambda_hi)}"
            )
        return rows


def _scan_chunk(args) -> tuple[int, int, list[tuple[bytes, tuple, tuple]]]:
    keys, cs, budget = args
    enumerated = 0
    passed = 0
    pool = []
    for key in keys:
        enumerated += 1
        g = decode_graph6(key)
        if not graph_passes(g, cs, budget):
            continue
        passed += 1
        cert = perron(g)
        lo, hi = cert.lo_exact, cert.hi_exact
        pool.append(
            (key, (lo.numerator, lo.denominator), (hi.numerator, hi.denominator))
        )
    return enumerated, passed, pool


def extremal_scan(
    source,
    constraints: ConstraintSet,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> SearchReport:
    """Certified maximum-spectral-radius scan over a graph universe.

    ``source`` is either an int n (built-in exhaustive enumeration), a
    path to a newline-delimited graph6 file (ingest mode, trusted to be
    isomorphism-deduplicated), or an iterable of graphs.
    """
    digest = None
    if isinstance(source, int):
        mode = "exhaustive"
        keys = list(_level_keys(source, workers))
    elif isinstance(source, (str, bytes)) or hasattr(source, "read"):
        mode = "ingest"
        with open(source, "rb") as fh:
            raw = fh.read()
        digest = hashlib.sha256(raw).hexdigest()
        keys = [line.strip() for line in raw.splitlines() if line.strip()]
    else:
        mode = "ingest"
        keys = [encode_graph6(g) for g in source]

    if workers > 1 and len(keys) > 4 * workers:
        chunk = (len(keys) + 4 * workers - 1) // (4 * workers)
        jobs = [
            (keys[i : i + chunk], constraints, budget)
            for i in range(0, len(keys), chunk)
        ]
        enumerated = passed = 0
        pool = []
        with ProcessPoolExecutor(max_workers=workers) as pexec:
            for part_enum, part_pass, part_pool in pexec.map(_scan_chunk, jobs):
                enumerated += part_enum
                passed += part_pass
                pool.extend(part_pool)
    else:
        enumerated, passed, pool = _scan_chunk((keys, constraints, budget))

    if not pool:
        return SearchReport(
            constraints=constraints,
            mode=mode,
            best=(),
            runner_up_gap=None,
            enumerated=enumerated,
            passed=passed,
            stream_digest=digest,
        )

    entries = [
        (key, Fraction(*lo), Fraction(*hi)) for key, lo, hi in sorted(pool)
    ]
    winner_keys, winner_certs, gap = _resolve_maximum(entries)
    best = []
    for key, cert in zip(winner_keys, winner_certs):
        g = decode_graph6(key)
        if not graph_passes(g, constraints, budget):
            raise AssertionError(f"winner {key!r} failed constraint re-validation")
        best.append((key.decode("ascii"), cert))
    return SearchReport(
        constraints=constraints,
        mode=mode,
        best=tuple(best),
        runner_up_gap=gap,
        enumerated=enumerated,
        passed=passed,
        stream_digest=digest,
    )


def _resolve_maximum(entries):
    """Entries: (key, lo, hi) rational intervals.  Returns the certified
    maximizer set (all cospectral ties), their certificates, and a
    certified lower bound on the gap to the runner-up."""
    max_lo = max(lo for _, lo, _ in entries)
    contenders = [e for e in entries if e[2] >= max_lo]
    others_hi = [hi for e_key, lo, hi in entries if hi < max_lo] or [None]

    refined: dict[bytes, PerronCertificate] = {}
    widths = (Fraction(1, 10**12), Fraction(1, 10**24), Fraction(1, 10**48))
    level = 0
    while len(contenders) > 1:
        polys = set()
        for key, _, _ in contenders:
            g = decode_graph6(key)
            if g.n <= EXACT_MAX_N:
                polys.add(char_poly(g))
            else:
                polys.add(key)
        if len(polys) == 1:
            break  # genuine cospectral tie: list them all
        if level >= len(widths):
            raise UndecidedError(
                "scan leaders did not separate at the deepest refinement"
            )
        new = []
        for key, _, _ in contenders:
            cert = refine_certificate(decode_graph6(key), widths[level])
            refined[key] = cert
            new.append((key, cert.lo_exact, cert.hi_exact))
        max_lo = max(lo for _, lo, _ in new)
        contenders = [e for e in new if e[2] >= max_lo]
        others_hi.extend(hi for _, lo, hi in new if hi < max_lo)
        level += 1

    winner_keys = [key for key, _, _ in contenders]
    certs = []
    for key in winner_keys:
        certs.append(refined.get(key) or perron(decode_graph6(key)))
    best_lo = min(c.lo_exact for c in certs)
    real_others = [h for h in others_hi if h is not None]
    gap = (best_lo - max(real_others)) if real_others else None
    if gap is not None and gap < 0:
        gap = Fraction(0)
    return winner_keys, certs, gap


# ---------------------------------------------------------------------------
# Local search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    detail: str
    lo_before: Fraction
    hi_before: Fraction
    lo_after: Fraction
    hi_after: Fraction
    accepted: bool


@dataclass(frozen=True)
class LocalSearchResult:
    graph: Graph
    trace: tuple[MoveRecord, ...]
    evaluations: int


def _certified_gt(
    g_new: Graph, cert_new: PerronCertificate, g_old: Graph, cert_old: PerronCertificate
) -> bool:
    if cert_new.lo_exact > cert_old.hi_exact:
        return True
    if cert_new.hi_exact <= cert_old.lo_exact:
        return False
    if g_new.n > EXACT_MAX_N:
        return False
    from .spectral import compare_spectral_radii

    try:
        return compare_spectral_radii(g_new, g_old).order == "GT"
    except UndecidedError:
        return False


def _candidate_moves(g: Graph, x: tuple[float, ...]):
    """Deterministic move stream: Perron-guided rotations first (receiver
    weight >= donor weight), then single-edge additions, then swaps."""
    order = sorted(range(g.n), key=lambda v: (-x[v], v))
    for u in order:
        for v in order:
            if u == v or x[u] < x[v] + 1e-9:
                continue
            moved = tuple(
                w for w in g.neighbors(v) if w != u and not g.has_edge(u, w)
            )
            if moved:
                yield ("rotation", f"v={v} u={u} W={moved}", None, (v, u, moved))
    nonedges = [
        (i, j)
        for i in range(g.n)
        for j in range(i + 1, g.n)
        if not g.has_edge(i, j)
    ]
    for i, j in nonedges:
        yield ("add", f"+{i}-{j}", ([(i, j)], []), None)
    edges = list(g.edges())
    for a, b in edges:
        for i, j in nonedges:
            yield ("swap", f"-{a}-{b} +{i}-{j}", ([(i, j)], [(a, b)]), None)


def local_search(
    seed: Graph,
    constraints: ConstraintSet,
    budget: int = 2000,
    cycle_budget: int = DEFAULT_BUDGET,
) -> LocalSearchResult:
    """Hill climb by first-improvement over rotations, edge additions and
    edge swaps; a move is accepted only when the new certificate lies
    strictly above the old one (escalating to the exact oracle on
    overlap) and the constraints re-validate."""
    from .graphs import rotate_edges

    if not graph_passes(seed, constraints, cycle_budget):
        raise ValueError("local search seed violates the constraint set")
    current = seed
    cert = perron(current)
    trace: list[MoveRecord] = []
    evaluations = 0
    improved = True
    while improved and evaluations < budget:
        improved = False
        for kind, detail, edit, rotation in _candidate_moves(current, cert.vector):
            if evaluations >= budget:
                break
            evaluations += 1
            try:
                if rotation is not None:
                    v, u, moved = rotation
                    cand = rotate_edges(current, v, u, moved)
                else:
                    add, remove = edit
                    cand = current.with_edges(add=add, remove=remove)
            except ValueError:
                continue
            try:
                ok = graph_passes(cand, constraints, cycle_budget)
            except ScanAborted:
                continue
            if not ok:
                continue
            cand_cert = perron(cand)
            accepted = _certified_gt(cand, cand_cert, current, cert)
            trace.append(
                MoveRecord(
                    kind,
                    detail,
                    cert.lo_exact,
                    cert.hi_exact,
                    cand_cert.lo_exact,
                    cand_cert.hi_exact,
                    accepted,
                )
            )
            if accepted:
                current = cand
                cert = cand_cert
                improved = True
                break
    return LocalSearchResult(current, tuple(trace), evaluations)
