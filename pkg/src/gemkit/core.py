"""Colored-graph data model: gems stored as one perfect matching per color.

A gem (graph-encoded manifold) on k colors is a k-regular multigraph with a
proper edge coloring: every vertex meets exactly one edge of each color, so
the c-colored edges form a fixed-point-free involution pi_c of the vertex
set.  ``matchings[c][v]`` is the vertex joined to ``v`` by its c-colored
edge.  Loops are forbidden; parallel edges of distinct colors are fine.

This module owns the graph value type, residues (connected components of
color-restricted spanning subgraphs), bipartiteness, canonical codes,
connected sums, dipole moves and the `.gem` text format.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import GemFormatError, StructuralError

COLOR_PRESERVING = "color-preserving"
UP_TO_COLOR_PERMUTATION = "up-to-color-permutation"


@dataclass(frozen=True)
class ColoredGraph:
    """Immutable k-regular properly edge-colored multigraph.

    All operations in gemkit are pure functions over this value; "mutation"
    is construction of a new graph, so instances are safe to share freely.
    """

    matchings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.matchings)
        object.__setattr__(self, "matchings", rows)
        if not rows:
            raise StructuralError("a gem needs at least one color")
        p = len(rows[0])
        if p < 2 or p % 2:
            raise StructuralError(f"vertex count must be even and >= 2, got {p}")
        for c, row in enumerate(rows):
            if len(row) != p:
                raise StructuralError(f"color {c}: expected {p} entries, got {len(row)}")
            for v, w in enumerate(row):
                if not 0 <= w < p:
                    raise StructuralError(f"color {c}: vertex {w} out of range")
                if w == v:
                    raise StructuralError(f"color {c}: loop at vertex {v}")
                if row[w] != v:
                    raise StructuralError(f"color {c}: not an involution at vertex {v}")

    @property
    def order(self) -> int:
        return len(self.matchings[0])

    @property
    def n_colors(self) -> int:
        return len(self.matchings)

    @property
    def colors(self) -> range:
        return range(len(self.matchings))

    def neighbor(self, v: int, c: int) -> int:
        """Vertex joined to ``v`` by its c-colored edge."""
        return self.matchings[c][v]

    def relabel(self, perm) -> "ColoredGraph":
        """Image under the vertex bijection ``v -> perm[v]``."""
        p = self.order
        perm = tuple(perm)
        if sorted(perm) != list(range(p)):
            raise StructuralError("relabel: not a vertex permutation")
        rows = []
        for row in self.matchings:
            new = [0] * p
            for v, w in enumerate(row):
                new[perm[v]] = perm[w]
            rows.append(tuple(new))
        return ColoredGraph(tuple(rows))

    def recolor(self, perm) -> "ColoredGraph":
        """Image under the color bijection ``c -> perm[c]``."""
        k = self.n_colors
        perm = tuple(perm)
        if sorted(perm) != list(range(k)):
            raise StructuralError("recolor: not a color permutation")
        rows = [()] * k
        for c, row in enumerate(self.matchings):
            rows[perm[c]] = row
        return ColoredGraph(tuple(rows))

    def __repr__(self):
        return f"ColoredGraph(order={self.order}, colors={self.n_colors})"


def residue_key(colors) -> tuple[int, ...]:
    """Canonical (sorted, duplicate-free) form of a color subset."""
    key = tuple(sorted(set(colors)))
    if not key:
        raise StructuralError("residue key must be a nonempty color set")
    return key


def complement_key(colors, n_colors: int) -> tuple[int, ...]:
    """Colors NOT in ``colors`` — the hat notation for residues."""
    drop = set(colors)
    return tuple(c for c in range(n_colors) if c not in drop)


def _check_colors(g: ColoredGraph, key) -> tuple[int, ...]:
    key = residue_key(key)
    if key[-1] >= g.n_colors or key[0] < 0:
        raise StructuralError(f"color out of range in key {key}")
    return key


@lru_cache(maxsize=None)
def residue_labels(g: ColoredGraph, key: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Component labels of the spanning subgraph on ``key`` colors.

    Returns ``(labels, count)`` where labels[v] is the component id of v,
    ids numbered 0.. in order of first appearance by vertex index.
    """
    p = g.order
    parent = list(range(p))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in key:
        row = g.matchings[c]
        for v in range(p):
            a, b = find(v), find(row[v])
            if a != b:
                parent[b] = a
    labels = [-1] * p
    count = 0
    for v in range(p):
        r = find(v)
        if labels[r] < 0:
            labels[r] = count
            count += 1
        labels[v] = labels[r]
    return tuple(labels), count


def residue_count(g: ColoredGraph, key) -> int:
    """Number of ``key``-residues: components of the ``key``-colored subgraph."""
    return residue_labels(g, _check_colors(g, key))[1]


@dataclass(frozen=True)
class Residue:
    """One connected component of a color-restricted spanning subgraph.

    ``graph`` is the component re-indexed as a standalone gem over
    ``len(key)`` colors; ``graph`` color j corresponds to ``key[j]`` and
    ``vertex_map[new] = old`` recovers original vertex ids.
    """

    key: tuple[int, ...]
    vertices: tuple[int, ...]
    graph: ColoredGraph
    vertex_map: tuple[int, ...]


def extract_residues(g: ColoredGraph, key) -> list[Residue]:
    """All ``key``-residues of g, as standalone re-indexed gems.

    The vertex sets partition the vertices of g.
    """
    key = _check_colors(g, key)
    labels, count = residue_labels(g, key)
    groups: list[list[int]] = [[] for _ in range(count)]
    for v, lab in enumerate(labels):
        groups[lab].append(v)
    out = []
    for verts in groups:
        index = {v: i for i, v in enumerate(verts)}
        rows = tuple(tuple(index[g.matchings[c][v]] for v in verts) for c in key)
        out.append(Residue(key=key, vertices=tuple(verts),
                           graph=ColoredGraph(rows), vertex_map=tuple(verts)))
    return out


def is_connected(g: ColoredGraph) -> bool:
    return residue_labels(g, tuple(g.colors))[1] == 1


def _require_connected(g: ColoredGraph):
    if not is_connected(g):
        raise StructuralError("operation requires a connected graph")


@lru_cache(maxsize=None)
def bipartition(g: ColoredGraph) -> tuple[int, ...] | None:
    """Vertex 2-coloring consistent with every edge, or None if impossible.

    Class of vertex 0 is 0.  Requires a connected graph.
    """
    _require_connected(g)
    p = g.order
    side = [-1] * p
    side[0] = 0
    queue = [0]
    while queue:
        v = queue.pop()
        for c in g.colors:
            w = g.matchings[c][v]
            if side[w] < 0:
                side[w] = 1 - side[v]
                queue.append(w)
            elif side[w] == side[v]:
                return None
    return tuple(side)


def is_bipartite(g: ColoredGraph) -> bool:
    return bipartition(g) is not None


def odd_cycle(g: ColoredGraph) -> tuple[int, ...] | None:
    """An odd closed walk witnessing non-bipartiteness, or None."""
    if bipartition(g) is not None:
        return None
    # BFS tree; the first same-side edge closes an odd cycle through the root.
    p = g.order
    side = [-1] * p
    parent: list[tuple[int, int] | None] = [None] * p
    side[0] = 0
    queue = [0]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for c in g.colors:
            w = g.matchings[c][v]
            if side[w] < 0:
                side[w] = 1 - side[v]
                parent[w] = (v, c)
                queue.append(w)
            elif side[w] == side[v]:
                def path(x):
                    out = [x]
                    while parent[x] is not None:
                        x = parent[x][0]
                        out.append(x)
                    return out[::-1]
                a, b = path(v), path(w)
                while len(a) > 1 and len(b) > 1 and a[1] == b[1]:
                    a.pop(0)
                    b.pop(0)
                return tuple(a + b[::-1][:-1])
    return None


# ---------------------------------------------------------------------------
# Canonical codes
# ---------------------------------------------------------------------------

def _bfs_stream(matchings, p, start, color_order, best):
    """Adjacency stream of the BFS relabeling seeded at (start, color_order).

    Vertices are renamed 0.. in discovery order, neighbors scanned in
    ``color_order``; the stream lists the renamed neighbor of each vertex,
    vertex-major then color.  Aborts with None as soon as the stream is
    lexicographically worse than ``best``.
    """
    label = [-1] * p
    label[start] = 0
    order = [start]
    nxt = 1
    stream = []
    pos = 0
    compare = best is not None
    for v in order:
        for c in color_order:
            w = matchings[c][v]
            lw = label[w]
            if lw < 0:
                lw = nxt
                label[w] = nxt
                nxt += 1
                order.append(w)
            if compare:
                b = best[pos]
                if lw > b:
                    return None
                if lw < b:
                    compare = False
            stream.append(lw)
            pos += 1
    return stream


@dataclass(frozen=True)
class CanonicalCode:
    """Byte string identifying a connected gem up to the chosen isomorphism
    flavor: equal codes (same flavor) iff isomorphic graphs."""

    data: bytes
    flavor: str

    def hex(self) -> str:
        return self.data.hex()


@lru_cache(maxsize=None)
def canonical_code(g: ColoredGraph, flavor: str = UP_TO_COLOR_PERMUTATION) -> CanonicalCode:
    """Canonical form via lexicographically minimal BFS adjacency stream.

    Streams are emitted from every start vertex (and, for the
    up-to-color-permutation flavor, every color order) with branch-and-bound
    pruning against the current minimum.  The code is decodable: it contains
    the full adjacency of the canonical representative.
    """
    if flavor not in (COLOR_PRESERVING, UP_TO_COLOR_PERMUTATION):
        raise StructuralError(f"unknown code flavor {flavor!r}")
    _require_connected(g)
    p, k = g.order, g.n_colors
    if flavor == COLOR_PRESERVING:
        color_orders = [tuple(range(k))]
    else:
        color_orders = list(itertools.permutations(range(k)))
    best = None
    for color_order in color_orders:
        for start in range(p):
            stream = _bfs_stream(g.matchings, p, start, color_order, best)
            if stream is not None:
                best = stream
    width = 1 if p <= 0xFF else 2
    head = bytes([flavor == UP_TO_COLOR_PERMUTATION, k, width]) + p.to_bytes(2, "big")
    body = b"".join(x.to_bytes(width, "big") for x in best)
    return CanonicalCode(data=head + body, flavor=flavor)


def decode_code(code: CanonicalCode | bytes | str) -> ColoredGraph:
    """Rebuild the canonical representative graph from its code."""
    if isinstance(code, CanonicalCode):
        data = code.data
    elif isinstance(code, str):
        try:
            data = bytes.fromhex(code)
        except ValueError as exc:
            raise GemFormatError(f"bad code hex: {exc}") from exc
    else:
        data = code
    if len(data) < 5:
        raise GemFormatError("canonical code too short")
    k, width = data[1], data[2]
    p = int.from_bytes(data[3:5], "big")
    body = data[5:]
    if len(body) != p * k * width:
        raise GemFormatError("canonical code length mismatch")
    vals = [int.from_bytes(body[i:i + width], "big") for i in range(0, len(body), width)]
    rows = tuple(tuple(vals[v * k + c] for v in range(p)) for c in range(k))
    try:
        return ColoredGraph(rows)
    except StructuralError as exc:
        raise GemFormatError(f"code does not encode a gem: {exc}") from exc


# ---------------------------------------------------------------------------
# Connected sum
# ---------------------------------------------------------------------------

def connected_sum(g1: ColoredGraph, g2: ColoredGraph, v1: int = 0,
                  v2: int | None = None) -> ColoredGraph:
    """Graph connected sum: delete v1, v2 and splice the hanging edges
    color by color.  Order is p1 + p2 - 2.

    When both inputs are bipartite and v2 is not given, v2 is chosen in the
    class opposite to v1 (classes read off the canonical bipartitions), the
    orientable-case convention; the result is then bipartite.
    """
    if g1.n_colors != g2.n_colors:
        raise StructuralError("connected sum needs equal color counts")
    _require_connected(g1)
    _require_connected(g2)
    if not 0 <= v1 < g1.order:
        raise StructuralError("v1 out of range")
    if v2 is None:
        b1, b2 = bipartition(g1), bipartition(g2)
        if b1 is not None and b2 is not None:
            v2 = next(w for w in range(g2.order) if b2[w] != b1[v1])
        else:
            v2 = 0
    if not 0 <= v2 < g2.order:
        raise StructuralError("v2 out of range")

    map1 = {}
    for v in range(g1.order):
        if v != v1:
            map1[v] = len(map1)
    off = len(map1)
    map2 = {}
    for v in range(g2.order):
        if v != v2:
            map2[v] = off + len(map2)

    rows = []
    for c in g1.colors:
        row = [0] * (g1.order + g2.order - 2)
        for v, w in enumerate(g1.matchings[c]):
            if v != v1 and w != v1:
                row[map1[v]] = map1[w]
        for v, w in enumerate(g2.matchings[c]):
            if v != v2 and w != v2:
                row[map2[v]] = map2[w]
        a = map1[g1.matchings[c][v1]]
        b = map2[g2.matchings[c][v2]]
        row[a], row[b] = b, a
        rows.append(tuple(row))
    return ColoredGraph(tuple(rows))


def disjoint_union(g1: ColoredGraph, g2: ColoredGraph) -> ColoredGraph:
    if g1.n_colors != g2.n_colors:
        raise StructuralError("disjoint union needs equal color counts")
    off = g1.order
    rows = tuple(tuple(list(r1) + [w + off for w in r2])
                 for r1, r2 in zip(g1.matchings, g2.matchings))
    return ColoredGraph(rows)


# ---------------------------------------------------------------------------
# Dipole moves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dipole:
    """A pair of vertices joined by exactly the edges of ``colors``, lying in
    distinct residues over the complementary colors.

    ``proper`` records whether elimination provably preserves the
    represented polyhedron (True), provably changes it (False), or could
    not be certified (None — never auto-eliminated).
    """

    vertices: tuple[int, int]
    colors: tuple[int, ...]
    proper: bool | None


def _joining_colors(g: ColoredGraph, u: int, v: int) -> tuple[int, ...]:
    return tuple(c for c in g.colors if g.matchings[c][u] == v)


def _dipole_properness(g: ColoredGraph, u: int, v: int,
                       colors: tuple[int, ...]) -> bool | None:
    # Proper when at least one of the two complementary residues at u, v
    # represents a sphere; certification delegated to recognition.
    from . import recognition

    comp = complement_key(colors, g.n_colors)
    labels, _ = residue_labels(g, comp)
    certs = []
    for root in (u, v):
        verts = [w for w in range(g.order) if labels[w] == labels[root]]
        index = {w: i for i, w in enumerate(verts)}
        rows = tuple(tuple(index[g.matchings[c][w]] for w in verts) for c in comp)
        certs.append(recognition.sphere_certificate(ColoredGraph(rows)))
    if any(c.status == recognition.CERTIFIED_SPHERE for c in certs):
        return True
    if all(c.status == recognition.CERTIFIED_NONSPHERE for c in certs):
        return False
    return None


def find_dipoles(g: ColoredGraph) -> tuple[Dipole, ...]:
    """All dipoles of g (pairs joined by 1..k-1 equally-colored edges whose
    endpoints lie in distinct complementary residues), with properness flags.

    Order-2 graphs have none by definition.
    """
    _require_connected(g)
    if g.order <= 2:
        return ()
    k = g.n_colors
    out = []
    seen = set()
    for u in range(g.order):
        for c in g.colors:
            v = g.matchings[c][u]
            if v < u or (u, v) in seen:
                continue
            seen.add((u, v))
            colors = _joining_colors(g, u, v)
            if not 1 <= len(colors) <= k - 1:
                continue
            labels, _ = residue_labels(g, complement_key(colors, k))
            if labels[u] == labels[v]:
                continue
            out.append(Dipole(vertices=(u, v), colors=colors,
                              proper=_dipole_properness(g, u, v, colors)))
    out.sort(key=lambda d: (d.vertices, d.colors))
    return tuple(out)


def add_dipole(g: ColoredGraph, at_vertex: int, colors) -> ColoredGraph:
    """Insert a proper dipole of the given colors next to ``at_vertex``.

    Two vertices u = p, v = p+1 are appended, joined to each other by the
    dipole colors; for every other color d, v takes over the d-edge slot at
    ``at_vertex`` and u picks up its old endpoint.  The complementary
    residue of v is then the order-2 sphere {v, at_vertex}, so the insertion
    is always proper, and eliminating (u, v) restores g exactly.
    """
    colors = residue_key(colors)
    k, p = g.n_colors, g.order
    if colors[-1] >= k:
        raise StructuralError("dipole color out of range")
    if not 1 <= len(colors) <= k - 1:
        raise StructuralError("dipole must use between 1 and k-1 colors")
    if not 0 <= at_vertex < p:
        raise StructuralError("vertex out of range")
    u, v = p, p + 1
    cset = set(colors)
    rows = []
    for c in g.colors:
        row = list(g.matchings[c]) + [0, 0]
        if c in cset:
            row[u], row[v] = v, u
        else:
            y = g.matchings[c][at_vertex]
            row[u], row[y] = y, u
            row[v], row[at_vertex] = at_vertex, v
        rows.append(tuple(row))
    return ColoredGraph(tuple(rows))


def eliminate_dipole(g: ColoredGraph, vertices, colors=None) -> ColoredGraph:
    """Remove a dipole pair and rejoin the hanging edges color by color.

    ``vertices`` must form a valid dipole; ``colors``, when given, must
    match the joining color set exactly.
    """
    u, v = sorted(vertices)
    if not (0 <= u < g.order and 0 <= v < g.order and u != v):
        raise StructuralError("invalid dipole vertices")
    if g.order <= 2:
        raise StructuralError("cannot eliminate a dipole from an order-2 graph")
    joining = _joining_colors(g, u, v)
    if colors is not None and residue_key(colors) != joining:
        raise StructuralError(f"vertices {u},{v} are joined by {joining}, not {tuple(colors)}")
    if not 1 <= len(joining) <= g.n_colors - 1:
        raise StructuralError(f"vertices {u},{v} do not form a dipole")
    labels, _ = residue_labels(g, complement_key(joining, g.n_colors))
    if labels[u] == labels[v]:
        raise StructuralError(f"vertices {u},{v} lie in the same complementary residue")

    remap = {}
    for w in range(g.order):
        if w not in (u, v):
            remap[w] = len(remap)
    cset = set(joining)
    rows = []
    for c in g.colors:
        row = [0] * (g.order - 2)
        for a, b in enumerate(g.matchings[c]):
            if a in (u, v) or b in (u, v):
                continue
            row[remap[a]] = remap[b]
        if c not in cset:
            a = remap[g.matchings[c][u]]
            b = remap[g.matchings[c][v]]
            row[a], row[b] = b, a
        rows.append(tuple(row))
    return ColoredGraph(tuple(rows))


def reduce(g: ColoredGraph) -> ColoredGraph:
    """Greedily eliminate proper dipoles until none are left.

    Dipoles flagged improper or unknown are never eliminated.  The highest-
    indexed proper dipole goes first, so freshly added dipoles are unwound
    in reverse insertion order.
    """
    _require_connected(g)
    while True:
        proper = [d for d in find_dipoles(g) if d.proper]
        if not proper:
            return g
        d = max(proper, key=lambda d: (d.vertices[1], d.vertices[0], d.colors))
        g = eliminate_dipole(g, d.vertices, d.colors)


# ---------------------------------------------------------------------------
# .gem text format
# ---------------------------------------------------------------------------

def format_gem(g: ColoredGraph) -> str:
    """Bit-exact `.gem` text: header line, one involution row per color."""
    lines = [f"gem {g.n_colors} {g.order}"]
    lines += [" ".join(str(w) for w in row) for row in g.matchings]
    return "\n".join(lines) + "\n"


def parse_gem(text: str) -> ColoredGraph:
    """Parse the `.gem` format; `#`-prefixed lines are comments."""
    if not text.endswith("\n"):
        raise GemFormatError("gem data must end with a newline")
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GemFormatError("empty gem file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "gem":
        raise GemFormatError(f"bad header line {lines[0]!r}")
    try:
        k, p = int(head[1]), int(head[2])
    except ValueError as exc:
        raise GemFormatError(f"bad header numbers: {exc}") from exc
    if len(lines) != 1 + k:
        raise GemFormatError(f"expected {k} matching rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        try:
            row = tuple(int(tok) for tok in ln.split())
        except ValueError as exc:
            raise GemFormatError(f"bad matching row {ln!r}: {exc}") from exc
        if len(row) != p:
            raise GemFormatError(f"row has {len(row)} entries, expected {p}")
        rows.append(row)
    try:
        return ColoredGraph(tuple(rows))
    except StructuralError as exc:
        raise GemFormatError(str(exc)) from exc


def load_gem(path) -> ColoredGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_gem(fh.read())


def save_gem(g: ColoredGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_gem(g))
