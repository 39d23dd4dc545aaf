"""Graph representation, named constructions, graph6 codec, canonical
labeling, and spectral-radius-aware surgeries (subdivision, edge rotation,
blow-up).

Graphs are immutable: adjacency is a tuple of integer bitsets (row ``v``
has bit ``u`` set iff ``uv`` is an edge), so every operation returns a new
value and everything is safe to share across threads and processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from . import kernels

MAX_VERTICES = 512


class SizeLimitError(ValueError):
    """An operation was asked to exceed its configured size cap."""


class Graph6Error(ValueError):
    """Malformed graph6 input; carries the offending byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class FamilyError(ValueError):
    """A family parameter violates its validity range."""


class Graph:
    """Simple undirected graph on vertices 0..n-1.

    ``labels`` carries optional construction annotations (partition tags,
    attachment vertex, cycle order); it never participates in equality.
    """

    __slots__ = ("n", "rows", "labels", "_m")

    def __init__(self, n: int, rows: tuple[int, ...], labels: dict | None = None):
        if not 1 <= n <= MAX_VERTICES:
            raise SizeLimitError(f"vertex count {n} outside 1..{MAX_VERTICES}")
        if len(rows) != n:
            raise ValueError(f"expected {n} adjacency rows, got {len(rows)}")
        full = (1 << n) - 1
        m2 = 0
        for v, row in enumerate(rows):
            if row & ~full:
                raise ValueError(f"row {v} has bits beyond vertex range")
            if (row >> v) & 1:
                raise ValueError(f"loop at vertex {v}")
            m2 += row.bit_count()
            mask = row
            while mask:
                b = mask & -mask
                u = b.bit_length() - 1
                mask ^= b
                if not (rows[u] >> v) & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")
        self.n = n
        self.rows = tuple(rows)
        self.labels = labels
        self._m = m2 // 2

    # -- basic accessors ---------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self._m

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def min_degree(self) -> int:
        return min(self.degrees())

    def max_degree(self) -> int:
        return max(self.degrees())

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(bits(self.rows[v]))

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            mask = self.rows[v] >> (v + 1) << (v + 1)
            for u in bits(mask):
                yield (v, u)

    def adjacency_matrix(self):
        import numpy as np

        a = np.zeros((self.n, self.n), dtype=float)
        for v in range(self.n):
            for u in bits(self.rows[v]):
                a[v, u] = 1.0
        return a

    # -- structure ---------------------------------------------------------

    def components(self) -> list[tuple[int, ...]]:
        seen = 0
        out = []
        for v in range(self.n):
            if (seen >> v) & 1:
                continue
            frontier = 1 << v
            members = 0
            while frontier:
                members |= frontier
                nxt = 0
                for u in bits(frontier):
                    nxt |= self.rows[u]
                frontier = nxt & ~members
            seen |= members
            out.append(tuple(bits(members)))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def induced(self, vertices: tuple[int, ...]) -> tuple["Graph", tuple[int, ...]]:
        """Subgraph induced by ``vertices`` plus the new->old index map."""
        keep = tuple(sorted(vertices))
        if not keep:
            raise ValueError("induced subgraph needs at least one vertex")
        pos = {v: i for i, v in enumerate(keep)}
        rows = [0] * len(keep)
        for i, v in enumerate(keep):
            for u in bits(self.rows[v]):
                j = pos.get(u)
                if j is not None:
                    rows[i] |= 1 << j
        return Graph(len(keep), tuple(rows)), keep

    def with_edges(self, add=(), remove=()) -> "Graph":
        rows = list(self.rows)
        for u, v in remove:
            if not (rows[u] >> v) & 1:
                raise ValueError(f"edge {u}-{v} not present")
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        for u, v in add:
            if u == v:
                raise ValueError(f"loop {u}-{u} rejected")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph) and self.n == other.n and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.edge_count})"


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def from_edges(n: int, edges, labels: dict | None = None) -> Graph:
    rows = [0] * n
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop {u}-{u} rejected")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows), labels)


# ---------------------------------------------------------------------------
# graph6 codec
# ---------------------------------------------------------------------------

GRAPH6_MAX_N = 258047


def encode_graph6(g: Graph) -> bytes:
    """Standard graph6 bytes: size header plus the upper triangle in
    column-major order, six bits per printable byte."""
    n = g.n
    if n > GRAPH6_MAX_N:
        raise SizeLimitError(f"graph6 caps at {GRAPH6_MAX_N} vertices")
    if n <= 62:
        head = bytes([n + 63])
    else:
        head = bytes(
            [126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63]
        )
    bits_out = []
    for j in range(1, n):
        col = g.rows[j]
        for i in range(j):
            bits_out.append((col >> i) & 1)
    while len(bits_out) % 6:
        bits_out.append(0)
    body = bytearray()
    for i in range(0, len(bits_out), 6):
        x = 0
        for b in bits_out[i : i + 6]:
            x = (x << 1) | b
        body.append(x + 63)
    return head + bytes(body)


def decode_graph6(data: bytes | str) -> Graph:
    """Decode one graph6 value; trailing bytes and nonzero padding are
    rejected with the byte offset of the problem."""
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.rstrip(b"\r\n")
    if data.startswith(b">>graph6<<"):
        data = data[len(b">>graph6<<") :]
    if not data:
        raise Graph6Error("empty graph6 input", 0)
    pos = 0
    if data[0] == 126:
        if len(data) >= 2 and data[1] == 126:
            raise Graph6Error("graph6 sizes beyond 258047 unsupported", 1)
        if len(data) < 4:
            raise Graph6Error("truncated graph6 size header", len(data))
        vals = []
        for k in (1, 2, 3):
            if not 63 <= data[k] <= 126:
                raise Graph6Error(f"invalid graph6 byte {data[k]}", k)
            vals.append(data[k] - 63)
        n = (vals[0] << 12) | (vals[1] << 6) | vals[2]
        pos = 4
    else:
        if not 63 <= data[0] <= 126:
            raise Graph6Error(f"invalid graph6 byte {data[0]}", 0)
        n = data[0] - 63
        pos = 1
    if n < 1:
        raise Graph6Error("graph6 with zero vertices unsupported", 0)
    if n > MAX_VERTICES:
        raise SizeLimitError(f"decoded vertex count {n} exceeds cap {MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - pos < nbytes:
        raise Graph6Error(
            f"expected {nbytes} body bytes for n={n}, got {len(data) - pos}",
            len(data),
        )
    if len(data) - pos > nbytes:
        raise Graph6Error("trailing bytes after graph6 body", pos + nbytes)
    bitvals = []
    for k in range(nbytes):
        byte = data[pos + k]
        if not 63 <= byte <= 126:
            raise Graph6Error(f"invalid graph6 byte {byte}", pos + k)
        x = byte - 63
        for shift in (5, 4, 3, 2, 1, 0):
            bitvals.append((x >> shift) & 1)
    for extra in range(nbits, len(bitvals)):
        if bitvals[extra]:
            raise Graph6Error("nonzero padding bits", pos + extra // 6)
    rows = [0] * n
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bitvals[idx]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            idx += 1
    return Graph(n, tuple(rows))


def read_graph6_file(path) -> Iterator[Graph]:
    """Graphs from a newline-delimited graph6 file."""
    with open(path, "rb") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield decode_graph6(line)


# ---------------------------------------------------------------------------
# Canonical form and bipartiteness
# ---------------------------------------------------------------------------

CANONICAL_MAX_N = 16


def canonical_form(g: Graph) -> bytes:
    """Canonical byte string: graph6 of the exact canonical relabeling.
    Equal outputs iff the inputs are isomorphic; capped at 16 vertices."""
    if g.n > CANONICAL_MAX_N:
        raise SizeLimitError(
            f"canonical_form caps at {CANONICAL_MAX_N} vertices, got {g.n}"
        )
    rows = kernels.canonical_rows(g.n, g.rows)
    return encode_graph6(Graph(g.n, rows))


def is_bipartite(g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """A proper 2-coloring (per component, side 0 holds the smallest
    vertex), or None when an odd cycle exists."""
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            v = queue.pop()
            for u in bits(g.rows[v]):
                if color[u] == -1:
                    color[u] = 1 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return None
    part0 = tuple(v for v in range(g.n) if color[v] == 0)
    part1 = tuple(v for v in range(g.n) if color[v] == 1)
    return (part0, part1)


# ---------------------------------------------------------------------------
# Surgeries
# ---------------------------------------------------------------------------


def subdivide_edge(g: Graph, u: int, v: int) -> Graph:
    """Insert a new vertex on the edge uv (new vertex gets index n)."""
    if not g.has_edge(u, v):
        raise ValueError(f"cannot subdivide: edge {u}-{v} not present")
    n = g.n + 1
    rows = [r for r in g.rows] + [0]
    rows[u] &= ~(1 << v)
    rows[v] &= ~(1 << u)
    w = n - 1
    rows[u] |= 1 << w
    rows[v] |= 1 << w
    rows[w] = (1 << u) | (1 << v)
    return Graph(n, tuple(rows))


def rotate_edges(g: Graph, v: int, u: int, moved: tuple[int, ...]) -> Graph:
    """Replace the edges vw by uw for every w in ``moved``.

    Requires moved ⊆ N(v) \\ N(u) with u, v excluded, so the result stays
    simple; the spectral radius strictly increases whenever the receiving
    vertex u has Perron weight at least that of v.
    """
    bad = [w for w in moved if w == u or w == v]
    if bad:
        raise ValueError(f"rotation set may not contain u or v: {bad}")
    bad = [w for w in moved if not g.has_edge(v, w)]
    if bad:
        raise ValueError(f"rotation set outside N({v}): {bad}")
    bad = [w for w in moved if g.has_edge(u, w)]
    if bad:
        raise ValueError(f"rotation set intersects N({u}): {bad}")
    return g.with_edges(
        add=[(u, w) for w in moved], remove=[(v, w) for w in moved]
    )


def blow_up(base: Graph, sizes) -> Graph:
    """Replace vertex u by an independent set of sizes[u] vertices; every
    base edge becomes a complete bipartite join."""
    sizes = tuple(sizes)
    if len(sizes) != base.n:
        raise ValueError(
            f"need one size per base vertex: got {len(sizes)} for n={base.n}"
        )
    if any(s < 1 for s in sizes):
        raise ValueError("blow-up sizes must be positive")
    offsets = [0] * base.n
    total = 0
    for v in range(base.n):
        offsets[v] = total
        total += sizes[v]
    edges = []
    for u, v in base.edges():
        for i in range(sizes[u]):
            for j in range(sizes[v]):
                edges.append((offsets[u] + i, offsets[v] + j))
    tags = tuple(v for v in range(base.n) for _ in range(sizes[v]))
    return from_edges(total, edges, labels={"blowup_of": tags})


# ---------------------------------------------------------------------------
# Named families
# ---------------------------------------------------------------------------

FAMILY_VARIANTS = (
    "turan",
    "bipartite_turan",
    "complete_bipartite",
    "cycle",
    "path",
    "subdivided_turan_edge",
    "path_replaced_turan",
    "cycle_attached_turan",
    "y_graph",
    "blow_up",
    "haggkvist",
    "odd_cycle_blowup",
    "grotzsch",
)


@dataclass(frozen=True)
class FamilySpec:
    """Parameterized description of a named construction."""

    variant: str
    n: int | None = None
    r: int | None = None
    a: int | None = None
    b: int | None = None
    k: int | None = None
    l: int | None = None
    part: str = "smaller"
    base: Graph | None = field(default=None, compare=False)
    sizes: tuple[int, ...] | None = None

    def to_text(self) -> str:
        items = [f"family={self.variant}"]
        for key in ("n", "r", "a", "b", "k", "l"):
            val = getattr(self, key)
            if val is not None:
                items.append(f"{key}={val}")
        if self.variant == "cycle_attached_turan":
            items.append(f"part={self.part}")
        if self.sizes is not None:
            items.append("sizes=" + ",".join(str(s) for s in self.sizes))
        return " ".join(items)


def parse_family_text(text: str) -> FamilySpec:
    """Parse the key-value form, e.g.
    ``family=cycle_attached_turan n=10 l=1 part=smaller``."""
    fields: dict[str, str] = {}
    for token in text.split():
        if "=" not in token:
            raise FamilyError(f"expected key=value, got {token!r}")
        key, val = token.split("=", 1)
        fields[key] = val
    if "family" not in fields:
        raise FamilyError("missing family= key")
    variant = fields.pop("family")
    kwargs: dict = {}
    for key, val in fields.items():
        if key in ("n", "r", "a", "b", "k", "l"):
            kwargs[key] = int(val)
        elif key == "part":
            kwargs["part"] = val
        elif key == "sizes":
            kwargs["sizes"] = tuple(int(s) for s in val.split(","))
        else:
            raise FamilyError(f"unknown family field {key!r}")
    return FamilySpec(variant, **kwargs)


def parse_family_shorthand(text: str) -> FamilySpec:
    """Parse the colon shorthand used by the CLI, e.g.
    ``cycle_attached_turan:16:2`` or ``complete_bipartite:3:4``."""
    parts = text.split(":")
    name = parts[0]
    args = parts[1:]

    def need(count: int) -> list[int]:
        if len(args) < count:
            raise FamilyError(f"{name} expects {count} parameters, got {len(args)}")
        return [int(a) for a in args[:count]]

    if name == "turan":
        n, r = need(2)
        return FamilySpec("turan", n=n, r=r)
    if name == "bipartite_turan":
        (n,) = need(1)
        return FamilySpec("bipartite_turan", n=n)
    if name == "complete_bipartite":
        a, b = need(2)
        return FamilySpec("complete_bipartite", a=a, b=b)
    if name in ("cycle", "path", "subdivided_turan_edge", "y_graph"):
        (n,) = need(1)
        return FamilySpec(name, n=n)
    if name == "path_replaced_turan":
        n, k = need(2)
        return FamilySpec(name, n=n, k=k)
    if name == "cycle_attached_turan":
        n, l = need(2)
        part = args[2] if len(args) > 2 else "smaller"
        return FamilySpec(name, n=n, l=l, part=part)
    if name == "haggkvist":
        (n,) = need(1)
        return FamilySpec(name, n=n)
    if name == "odd_cycle_blowup":
        n, l = need(2)
        return FamilySpec(name, n=n, l=l)
    if name == "grotzsch":
        return FamilySpec(name)
    raise FamilyError(f"unknown family {name!r}")


def _turan_bipartite(n: int) -> tuple[list[int], int]:
    """Rows of T_{n,2} with the smaller part first; returns (rows, a)
    where a is the smaller part size."""
    a = n // 2
    rows = [0] * n
    for i in range(a):
        for j in range(a, n):
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return rows, a


def build_family(spec: FamilySpec) -> Graph:
    """Construct the named graph; deterministic vertex numbering (part 1,
    then part 2, then cycle/path vertices in walk order)."""
    v = spec.variant
    if v == "turan":
        return _build_turan(spec)
    if v == "bipartite_turan":
        n = _req(spec, "n")
        if n < 1:
            raise FamilyError("bipartite_turan requires n >= 1")
        rows, a = _turan_bipartite(n)
        return Graph(n, tuple(rows), labels=_part_labels(v, a, n))
    if v == "complete_bipartite":
        a, b = _req(spec, "a"), _req(spec, "b")
        if a < 1 or b < 1:
            raise FamilyError("complete_bipartite requires a, b >= 1")
        rows = [0] * (a + b)
        for i in range(a):
            for j in range(a, a + b):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        return Graph(a + b, tuple(rows), labels=_part_labels(v, a, a + b))
    if v == "cycle":
        n = _req(spec, "n")
        if n < 3:
            raise FamilyError("cycle requires n >= 3")
        return from_edges(
            n, [(i, (i + 1) % n) for i in range(n)], labels={"family": v}
        )
    if v == "path":
        n = _req(spec, "n")
        if n < 1:
            raise FamilyError("path requires n >= 1")
        return from_edges(n, [(i, i + 1) for i in range(n - 1)], labels={"family": v})
    if v == "subdivided_turan_edge":
        n = _req(spec, "n")
        if n < 5:
            raise FamilyError("subdivided_turan_edge requires n >= 5")
        return build_family(FamilySpec("path_replaced_turan", n=n, k=1))
    if v == "path_replaced_turan":
        return _build_path_replaced(spec)
    if v == "cycle_attached_turan":
        return _build_cycle_attached(spec)
    if v == "y_graph":
        n = _req(spec, "n")
        if n < 6:
            raise FamilyError("y_graph requires n >= 6")
        spine = n - 4
        edges = [(i, i + 1) for i in range(spine - 1)]
        edges += [(0, spine), (0, spine + 1), (spine - 1, spine + 2), (spine - 1, spine + 3)]
        return from_edges(n, edges, labels={"family": v})
    if v == "blow_up":
        if spec.base is None or spec.sizes is None:
            raise FamilyError("blow_up requires base and sizes")
        return blow_up(spec.base, spec.sizes)
    if v == "haggkvist":
        n = _req(spec, "n")
        if n < 6 or n % 6:
            raise FamilyError("haggkvist requires n divisible by 6")
        return _linked_blocks(n_blocks=3, half=n // 6, family=v)
    if v == "odd_cycle_blowup":
        n, l = _req(spec, "n"), _req(spec, "l")
        if l < 1:
            raise FamilyError("odd_cycle_blowup requires l >= 1")
        q = 2 * (2 * l + 1)
        if n < q or n % q:
            raise FamilyError(f"odd_cycle_blowup requires n divisible by {q}")
        return _linked_blocks(n_blocks=2 * l + 1, half=n // q, family=v)
    if v == "grotzsch":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(5 + i, (i + 1) % 5) for i in range(5)]
        spokes += [(5 + i, (i - 1) % 5) for i in range(5)]
        hub = [(10, 5 + i) for i in range(5)]
        return from_edges(11, outer + spokes + hub, labels={"family": v})
    raise FamilyError(f"unknown family {v!r}")


def _req(spec: FamilySpec, key: str) -> int:
    val = getattr(spec, key)
    if val is None:
        raise FamilyError(f"{spec.variant} requires parameter {key}")
    return val


def _part_labels(fam: str, a: int, n: int) -> dict:
    return {"family": fam, "parts": (0,) * a + (1,) * (n - a)}


def _build_turan(spec: FamilySpec) -> Graph:
    n, r = _req(spec, "n"), _req(spec, "r")
    if r < 1 or n < 1:
        raise FamilyError("turan requires n >= 1 and r >= 1")
    base, rem = divmod(n, r)
    sizes = [base] * (r - rem) + [base + 1] * rem
    sizes = [s for s in sizes if s > 0]
    rows = [0] * n
    tags = []
    offset = 0
    blocks = []
    for idx, s in enumerate(sizes):
        blocks.append((offset, s))
        tags += [idx] * s
        offset += s
    for bi in range(len(blocks)):
        for bj in range(bi + 1, len(blocks)):
            oi, si = blocks[bi]
            oj, sj = blocks[bj]
            for x in range(oi, oi + si):
                for y in range(oj, oj + sj):
                    rows[x] |= 1 << y
                    rows[y] |= 1 << x
    return Graph(n, tuple(rows), labels={"family": "turan", "parts": tuple(tags)})


def _build_path_replaced(spec: FamilySpec) -> Graph:
    n, k = _req(spec, "n"), _req(spec, "k")
    if k < 1:
        raise FamilyError("path_replaced_turan requires k >= 1")
    if n < 2 * k + 3:
        raise FamilyError(f"path_replaced_turan requires n >= {2 * k + 3}")
    m = n - 2 * k + 1
    rows, a = _turan_bipartite(m)
    rows += [0] * (2 * k - 1)
    # replace the edge 0-a by the path 0, m, m+1, ..., m+2k-2, a
    rows[0] &= ~(1 << a)
    rows[a] &= ~(1 << 0)
    chain = [0] + list(range(m, m + 2 * k - 1)) + [a]
    for x, y in zip(chain, chain[1:]):
        rows[x] |= 1 << y
        rows[y] |= 1 << x
    labels = {
        "family": "path_replaced_turan",
        "parts": (0,) * a + (1,) * (m - a) + (2,) * (2 * k - 1),
        "path": tuple(chain),
    }
    return Graph(n, tuple(rows), labels)


def _build_cycle_attached(spec: FamilySpec) -> Graph:
    n, l = _req(spec, "n"), _req(spec, "l")
    if l < 1:
        raise FamilyError("cycle_attached_turan requires l >= 1")
    if n < 2 * l + 4:
        raise FamilyError(f"cycle_attached_turan requires n >= {2 * l + 4}")
    if spec.part not in ("smaller", "larger"):
        raise FamilyError("part must be 'smaller' or 'larger'")
    m = n - 2 * l
    rows, a = _turan_bipartite(m)
    rows += [0] * (2 * l)
    u1 = 0 if spec.part == "smaller" else a
    cycle = [u1] + list(range(m, m + 2 * l))
    for x, y in zip(cycle, cycle[1:] + [u1]):
        rows[x] |= 1 << y
        rows[y] |= 1 << x
    labels = {
        "family": "cycle_attached_turan",
        "parts": (0,) * a + (1,) * (m - a) + (2,) * (2 * l),
        "u1": u1,
        "cycle": tuple(cycle),
    }
    return Graph(n, tuple(rows), labels)


def _linked_blocks(n_blocks: int, half: int, family: str) -> Graph:
    """Disjoint complete bipartite blocks K_{half,half} with one selected
    vertex per block, the selected vertices joined in a cycle."""
    per = 2 * half
    n = n_blocks * per
    edges = []
    picks = []
    for blk in range(n_blocks):
        off = blk * per
        picks.append(off)
        for i in range(half):
            for j in range(half, per):
                edges.append((off + i, off + j))
    for i in range(n_blocks):
        edges.append((picks[i], picks[(i + 1) % n_blocks]))
    return from_edges(n, edges, labels={"family": family, "cycle": tuple(picks)})
