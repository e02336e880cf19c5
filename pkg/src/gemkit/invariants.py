"""Euler characteristic, fundamental-group presentations and homology.

Two independent routes to first homology are kept deliberately separate and
cross-checked on every call:

(A) the colored-graph presentation of the fundamental group read off two
    chosen colors (generators = residues missing both colors, relators =
    bicolored cycles, a spanning tree of the two-colored vertex subcomplex
    killing its share of generators), abelianized by Smith normal form;

(B) the edge-path group of the 2-skeleton of the dual pseudocomplex,
    rebuilt from residue duality (dual vertices = residues missing one
    color, dual edges = residues missing two, dual triangles = residues
    missing three), with generators the edges off a spanning tree and one
    relator per triangle boundary.

Route (A) presents pi1 of the compact manifold or of its singular model
depending on where the singular color sits relative to the chosen pair;
route (B) always computes the singular model.  Disagreement raises, and is
always a bug.

All matrix arithmetic is exact arbitrary-precision integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import core, genus, recognition
from .errors import AnalysisRefused, InternalConsistencyError, StructuralError

COMPACT = "compact-manifold"
SINGULAR = "singular-manifold"


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(rows: list[list[int]]) -> tuple[int, ...]:
    """Positive invariant factors d1 | d2 | ... of an integer matrix.

    Plain elimination with smallest-pivot selection; exact integers
    throughout, no modular shortcuts.  The number of factors is the rank;
    trailing zero diagonal entries are not reported.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    factors = []
    s = 0
    while True:
        # locate the smallest nonzero entry of the remaining block
        pivot = None
        best = None
        for i in range(s, m):
            row = a[i]
            for j in range(s, n):
                v = row[j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        i, j = pivot
        a[s], a[i] = a[i], a[s]
        for row in a:
            row[s], row[j] = row[j], row[s]
        while True:
            # clear column s, then row s; repeat while remainders pop up
            redo = False
            for i in range(s + 1, m):
                if a[i][s]:
                    q = a[i][s] // a[s][s]
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[s])]
                    if a[i][s]:
                        a[s], a[i] = a[i], a[s]
                        redo = True
            if redo:
                continue
            for j in range(s + 1, n):
                if a[s][j]:
                    q = a[s][j] // a[s][s]
                    if q:
                        for row in a:
                            row[j] -= q * row[s]
                    if a[s][j]:
                        for row in a:
                            row[s], row[j] = row[j], row[s]
                        redo = True
            if not redo:
                break
        # force divisibility into the rest of the block
        d = abs(a[s][s])
        fixed = True
        for i in range(s + 1, m):
            if any(v % d for v in a[i][s + 1:]):
                a[s] = [x + y for x, y in zip(a[s], a[i])]
                fixed = False
                break
        if not fixed:
            continue
        factors.append(d)
        s += 1
        if s == m or s == n:
            break
    return tuple(factors)


def h1_text(free_rank: int, torsion: tuple[int, ...]) -> str:
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts += [f"Z/{t}" for t in torsion]
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Euler characteristics
# ---------------------------------------------------------------------------

def euler_characteristic(g: core.ColoredGraph) -> int:
    """Euler characteristic of the dual pseudocomplex of g.

    k-simplices of the complex correspond to residues over n-k colors
    (n = dimension), with the n-simplices being the graph vertices.
    """
    if not core.is_connected(g):
        raise StructuralError("euler characteristic requires a connected graph")
    k = g.n_colors
    n = k - 1
    chi = 0
    for dim in range(n + 1):
        size = n - dim
        if size == 0:
            count = g.order
        else:
            count = sum(core.residue_count(g, sub)
                        for sub in itertools.combinations(range(k), size))
        chi += count if dim % 2 == 0 else -count
    return chi


def euler_via_genus(g: core.ColoredGraph, eps=None) -> int:
    """Euler characteristic of the represented singular 4-manifold from the
    genus/subgenus split: 2 - 2*rho_eps + sum_i rho with color eps_i dropped.

    Independent of eps; the all-permutation sweep is asserted and any
    mismatch is a structural bug (useful as a fuzz oracle).  Requires a
    5-colored crystallization.
    """
    if g.n_colors != 5:
        raise StructuralError("euler_via_genus needs a 5-colored graph")
    ok, counts = recognition.is_crystallization(g)
    if not ok:
        raise StructuralError(f"not a crystallization (hat-residue counts {counts})")
    report = genus.genus_all(g)
    values = {e: 2 - 2 * report.rho[e] + sum(report.subgenera[e])
              for e in report.rho}
    distinct = set(values.values())
    if len(distinct) != 1:
        raise InternalConsistencyError(
            f"genus-based euler characteristic depends on permutation: {values}")
    val = distinct.pop()
    if val.denominator != 1:
        raise InternalConsistencyError(f"non-integral euler characteristic {val}")
    if eps is not None:
        return int(values[genus.CyclicPermutation.canonical(tuple(eps))
                          if not isinstance(eps, genus.CyclicPermutation) else eps])
    return int(val)


# ---------------------------------------------------------------------------
# Fundamental-group presentations (route A)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """Group presentation read off a color pair (i, j).

    Generators are 1-based and correspond to the residues missing both i
    and j; ``relators`` holds one signed word per {i,j}-colored cycle;
    ``tree_relators`` lists the generators killed by a maximal tree of the
    (i, j)-vertex subcomplex of the dual.
    """

    generator_count: int
    relators: tuple[tuple[int, ...], ...]
    tree_relators: tuple[int, ...]
    colors: tuple[int, int]
    flavor: str

    def all_relators(self) -> tuple[tuple[int, ...], ...]:
        return self.relators + tuple((t,) for t in self.tree_relators)

    def to_text(self) -> str:
        """Plain-text export: generator line then one relator word per line
        as signed 1-based generator indices."""
        lines = ["gens: " + " ".join(f"x{i}" for i in range(1, self.generator_count + 1))]
        lines += [" ".join(str(x) for x in w) for w in self.all_relators()]
        return "\n".join(lines) + "\n"


def presentation_raw(g: core.ColoredGraph, i: int, j: int,
                     flavor: str = COMPACT) -> Presentation:
    """Build the (i, j) presentation without any manifold-hood validation.

    Word rule: walk each {i,j}-cycle from its least vertex, i-colored edge
    first.  Every landing emits the generator of the landing vertex's
    residue missing both colors: positively after an i-edge, negatively
    after a j-edge.  Words are stored freely and cyclically reduced.  The
    sign convention is pinned by the edge-path oracle: it is the unique one
    of the natural candidates whose abelianization agrees with it across
    the enumerated corpus.
    """
    if g.n_colors < 4:
        raise StructuralError("group presentations need at least 4 colors")
    if i == j or not (0 <= i < g.n_colors and 0 <= j < g.n_colors):
        raise StructuralError(f"bad color pair ({i}, {j})")
    core._require_connected(g)
    comp_key = core.complement_key((i, j), g.n_colors)
    gen_labels, gen_count = core.residue_labels(g, comp_key)

    cycle_labels, cycle_count = core.residue_labels(g, (i, j))
    starts = {}
    for v in range(g.order):
        starts.setdefault(cycle_labels[v], v)
    relators = []
    for cyc in range(cycle_count):
        v0 = starts[cyc]
        word = []
        v = v0
        while True:
            w = g.matchings[i][v]
            word.append(gen_labels[w] + 1)
            v = g.matchings[j][w]
            word.append(-(gen_labels[v] + 1))
            if v == v0:
                break
        relators.append(tuple(_free_cyclic_reduce(word)))

    # spanning tree of the dual subcomplex on i- and j-labelled vertices:
    # nodes are the residues missing i (resp. j), one edge per generator
    i_labels, i_count = core.residue_labels(g, core.complement_key((i,), g.n_colors))
    j_labels, j_count = core.residue_labels(g, core.complement_key((j,), g.n_colors))
    rep = {}
    for v in range(g.order):
        rep.setdefault(gen_labels[v], v)
    edges = []
    for gen in range(gen_count):
        v = rep[gen]
        edges.append((i_labels[v], i_count + j_labels[v]))
    adj: dict[int, list[tuple[int, int]]] = {}
    for idx, (a, b) in enumerate(edges):
        adj.setdefault(a, []).append((idx, b))
        adj.setdefault(b, []).append((idx, a))
    seen = {0}
    tree = []
    frontier = [0]
    while frontier:
        node = frontier.pop(0)
        for idx, other in sorted(adj.get(node, ())):
            if other not in seen:
                seen.add(other)
                tree.append(idx + 1)
                frontier.append(other)
    if len(seen) != i_count + j_count:
        raise InternalConsistencyError("two-color vertex subcomplex is disconnected")
    return Presentation(generator_count=gen_count, relators=tuple(relators),
                        tree_relators=tuple(sorted(tree)), colors=(i, j),
                        flavor=flavor)


def pi1_presentation(g: core.ColoredGraph, i: int | None = None,
                     j: int | None = None, flavor: str = COMPACT) -> Presentation:
    """Validated presentation of pi1 of the represented compact manifold
    (flavor compact-manifold: both colors non-singular) or of its singular
    model (flavor singular-manifold: every singular color among {i, j})."""
    if flavor not in (COMPACT, SINGULAR):
        raise StructuralError(f"unknown presentation flavor {flavor!r}")
    sing = recognition.singular_colors(g)
    if i is None or j is None:
        if flavor == COMPACT:
            candidates = [c for c in g.colors if c not in sing]
            if len(candidates) < 2:
                raise StructuralError("no non-singular color pair available")
            i, j = candidates[0], candidates[1]
        else:
            if len(sing) > 2:
                raise StructuralError("more than two singular colors")
            j = sing[-1] if sing else 1
            i = next(c for c in g.colors if c != j)
    if flavor == COMPACT and (i in sing or j in sing):
        raise StructuralError(f"colors ({i}, {j}) must both be non-singular")
    if flavor == SINGULAR and not set(sing) <= {i, j}:
        raise StructuralError(f"singular colors {sing} must lie in ({i}, {j})")
    return presentation_raw(g, i, j, flavor)


def h1_from_presentation(pres: Presentation) -> tuple[int, tuple[int, ...]]:
    """(free rank, torsion factors) of the presented group's abelianization."""
    gens = pres.generator_count
    rows = []
    for word in pres.all_relators():
        row = [0] * gens
        for x in word:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    if not rows or gens == 0:
        return gens, ()
    factors = smith_normal_form(rows)
    torsion = tuple(d for d in factors if d > 1)
    return gens - len(factors), torsion


def abelian_rank(pres: Presentation) -> int:
    """Minimal generator count of the abelianization: a lower bound for the
    rank of the presented group."""
    free_rank, torsion = h1_from_presentation(pres)
    return free_rank + len(torsion)


# ---------------------------------------------------------------------------
# Tietze simplification
# ---------------------------------------------------------------------------

def _free_cyclic_reduce(word: list[int]) -> list[int]:
    stack: list[int] = []
    for x in word:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    while len(stack) >= 2 and stack[0] == -stack[-1]:
        stack = stack[1:-1]
    return stack


def tietze_trivializes(pres: Presentation, max_moves: int = 10_000,
                       max_word_length: int = 4096) -> bool:
    """Bounded Tietze simplification; True when the empty presentation is
    reached, certifying the presented group trivial.

    The only moves are free/cyclic reduction and elimination of a generator
    occurring exactly once in some relator.  False means "gave up", never
    "nontrivial".
    """
    gens = pres.generator_count
    relators = [_free_cyclic_reduce(list(w)) for w in pres.all_relators()]
    moves = 0
    while True:
        relators = [w for w in relators if w]
        if gens == 0:
            return True
        target = None
        for ridx, w in enumerate(relators):
            counts: dict[int, int] = {}
            for x in w:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = [x for x, n in counts.items() if n == 1]
            if once:
                x = min(once)
                if target is None or len(w) < len(relators[target[0]]):
                    target = (ridx, x)
        if target is None:
            return gens == 0
        ridx, x = target
        w = relators.pop(ridx)
        pos = next(idx for idx, t in enumerate(w) if abs(t) == x)
        sign = 1 if w[pos] > 0 else -1
        rest = w[pos + 1:] + w[:pos]
        inv_rest = [-t for t in reversed(rest)]
        repl = inv_rest if sign > 0 else rest
        repl_inv = rest if sign > 0 else inv_rest

        new_relators = []
        for word in relators:
            out: list[int] = []
            for t in word:
                if abs(t) == x:
                    out.extend(repl if t > 0 else repl_inv)
                else:
                    out.append(t)
            out = _free_cyclic_reduce(out)
            if len(out) > max_word_length:
                return False
            new_relators.append(out)
        # drop generator x, renumber the rest down
        relators = [[t - (1 if t > x else 0) if t > 0 else t + (1 if -t > x else 0)
                     for t in word] for word in new_relators]
        gens -= 1
        moves += 1
        if moves > max_moves:
            return False


# ---------------------------------------------------------------------------
# Edge-path oracle (route B)
# ---------------------------------------------------------------------------

def h1_via_edge_path(g: core.ColoredGraph) -> tuple[int, tuple[int, ...]]:
    """First homology of the dual polyhedron from its 2-skeleton.

    Dual vertices, edges and triangles are the residues missing one, two
    and three colors; generators are the dual edges off a breadth-first
    spanning tree, with one relator per triangle boundary.  This presents
    pi1 of the singular model and abelianizes to H1.
    """
    core._require_connected(g)
    k = g.n_colors
    if k < 4:
        raise StructuralError("edge-path homology needs at least 4 colors")

    node_labels = {}
    node_base = {}
    total_nodes = 0
    for c in range(k):
        labels, count = core.residue_labels(g, core.complement_key((c,), k))
        node_labels[c] = labels
        node_base[c] = total_nodes
        total_nodes += count

    edge_labels = {}
    edge_base = {}
    edge_ends = []
    for pair in itertools.combinations(range(k), 2):
        labels, count = core.residue_labels(g, core.complement_key(pair, k))
        edge_labels[pair] = labels
        edge_base[pair] = len(edge_ends)
        rep = {}
        for v in range(g.order):
            rep.setdefault(labels[v], v)
        for comp in range(count):
            v = rep[comp]
            a, b = pair
            edge_ends.append((node_base[a] + node_labels[a][v],
                              node_base[b] + node_labels[b][v]))

    # breadth-first spanning tree over the dual 1-skeleton (a multigraph)
    adj: dict[int, list[tuple[int, int]]] = {}
    for idx, (a, b) in enumerate(edge_ends):
        adj.setdefault(a, []).append((idx, b))
        adj.setdefault(b, []).append((idx, a))
    in_tree = [False] * len(edge_ends)
    seen = {0}
    frontier = [0]
    while frontier:
        node = frontier.pop(0)
        for idx, other in sorted(adj.get(node, ())):
            if other not in seen:
                seen.add(other)
                in_tree[idx] = True
                frontier.append(other)
    if len(seen) != total_nodes:
        raise InternalConsistencyError("dual 1-skeleton is disconnected")
    gen_of_edge = {}
    for idx, tree in enumerate(in_tree):
        if not tree:
            gen_of_edge[idx] = len(gen_of_edge) + 1

    def edge_id(pair, vertex):
        return edge_base[pair] + edge_labels[pair][vertex]

    rows = []
    gens = len(gen_of_edge)
    for triple in itertools.combinations(range(k), 3):
        labels, count = core.residue_labels(g, core.complement_key(triple, k))
        rep = {}
        for v in range(g.order):
            rep.setdefault(labels[v], v)
        reps = [rep[cidx] for cidx in range(count)]
        a, b, c = triple
        for v in reps:
            # boundary word: (a->b) + (b->c) - (a->c)
            row = [0] * gens
            for pair, sgn in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
                idx = edge_id(pair, v)
                if idx in gen_of_edge:
                    row[gen_of_edge[idx] - 1] += sgn
            rows.append(row)
    if not rows or gens == 0:
        return gens, ()
    factors = smith_normal_form(rows)
    torsion = tuple(d for d in factors if d > 1)
    return gens - len(factors), torsion


# ---------------------------------------------------------------------------
# Simple-connectivity certificates and homology reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pi1Certificate:
    """Tri-state knowledge about pi1 of the represented compact manifold.

    ``m`` and ``m_prime`` are abelianization lower bounds for the ranks of
    pi1 of the manifold and of its singular model; "trivial" is certified
    by Tietze collapse to the empty presentation, "nontrivial" by a nonzero
    abelianization.
    """

    status: str  # "trivial" | "nontrivial" | "unknown"
    m: int
    m_prime: int
    witness_colors: tuple[int, int] | None


@lru_cache(maxsize=None)
def pi1_certificate(g: core.ColoredGraph) -> Pi1Certificate:
    sing = recognition.singular_colors(g)
    if len(sing) > 2:
        raise StructuralError(
            f"{len(sing)} singular colors leave no valid color pair for the "
            "singular model's group")
    pairs = [p for p in itertools.combinations(range(g.n_colors), 2)
             if not set(p) & set(sing)]
    if not pairs:
        raise StructuralError("no non-singular color pair for pi1")
    first = presentation_raw(g, *pairs[0])
    m = abelian_rank(first)
    if len(sing) == 2:
        m_prime = abelian_rank(presentation_raw(g, sing[0], sing[1]))
    elif sing:
        m_prime = abelian_rank(
            presentation_raw(g, next(c for c in g.colors if c != sing[0]), sing[0]))
    else:
        m_prime = m
    if m > 0:
        return Pi1Certificate("nontrivial", m, m_prime, None)
    for pair in pairs:
        pres = presentation_raw(g, *pair)
        if tietze_trivializes(pres):
            # pi1 of the singular model is a quotient, so it collapses too
            return Pi1Certificate("trivial", 0, 0, pair)
    return Pi1Certificate("unknown", m, m_prime, None)


@dataclass(frozen=True)
class HomologyReport:
    betti1: int
    betti2: int
    betti1_singular: int
    torsion: tuple[int, ...]
    torsion_singular: tuple[int, ...]
    chi_singular: int
    contracted: bool
    conditional: bool

    def to_json(self) -> dict:
        return {
            "betti1": self.betti1,
            "betti2": self.betti2,
            "betti1_singular": self.betti1_singular,
            "torsion": list(self.torsion),
            "torsion_singular": list(self.torsion_singular),
            "chi_singular": self.chi_singular,
            "h1": h1_text(self.betti1, self.torsion),
            "contracted": self.contracted,
            "conditional": self.conditional,
        }


@lru_cache(maxsize=None)
def homology(g: core.ColoredGraph) -> HomologyReport:
    """Homology of the represented compact 4-manifold and its singular model.

    H1 of the singular model is computed along both routes (A) and (B) and
    must agree; the second Betti number comes from the Euler characteristic
    and the first Betti numbers.
    """
    if g.n_colors != 5:
        raise StructuralError("homology needs a 5-colored graph")
    mc = recognition.check_closed_manifold(g)
    if not mc.is_manifold:
        raise StructuralError("not a manifold complex")
    sing = mc.singular_colors
    if len(sing) > 1:
        raise StructuralError("more than one singular color")

    compact_pair = tuple(c for c in g.colors if c not in sing)[:2]
    pres_compact = presentation_raw(g, *compact_pair)
    b1, torsion = h1_from_presentation(pres_compact)

    if sing:
        pres_sing = presentation_raw(
            g, next(c for c in g.colors if c != sing[0]), sing[0])
        b1_hat_a, torsion_hat_a = h1_from_presentation(pres_sing)
    else:
        b1_hat_a, torsion_hat_a = b1, torsion
    b1_hat_b, torsion_hat_b = h1_via_edge_path(g)
    if (b1_hat_a, torsion_hat_a) != (b1_hat_b, torsion_hat_b):
        raise InternalConsistencyError(
            "H1 oracles disagree: presentation gives "
            f"{h1_text(b1_hat_a, torsion_hat_a)}, edge-path gives "
            f"{h1_text(b1_hat_b, torsion_hat_b)}")

    chi = euler_characteristic(g)
    contracted = all(
        core.residue_count(g, core.complement_key((c,), g.n_colors)) == 1
        for c in g.colors)
    if contracted and recognition.is_crystallization(g)[0]:
        chi_genus = euler_via_genus(g)
        if chi_genus != chi:
            raise InternalConsistencyError(
                f"euler characteristic mismatch: counts {chi}, genus {chi_genus}")
    betti2 = chi - 2 + b1_hat_b + b1
    return HomologyReport(betti1=b1, betti2=betti2, betti1_singular=b1_hat_b,
                          torsion=torsion, torsion_singular=torsion_hat_b,
                          chi_singular=chi, contracted=contracted,
                          conditional=mc.conditional)


def beta2_via_genus(g: core.ColoredGraph) -> int:
    """Second Betti number from the genus/subgenus split, for certified
    simply-connected crystallizations: sum of subgenera minus twice the
    genus, independent of the permutation.

    Also asserts the value never exceeds any single subgenus and matches
    the homology report.
    """
    cert = pi1_certificate(g)
    if cert.status != "trivial":
        raise AnalysisRefused(
            f"beta2_via_genus needs certified trivial pi1 (status: {cert.status})")
    ok, counts = recognition.is_crystallization(g)
    if not ok:
        raise StructuralError(f"not a crystallization (hat-residue counts {counts})")
    report = genus.genus_all(g)
    values = {e: sum(report.subgenera[e]) - 2 * report.rho[e] for e in report.rho}
    distinct = set(values.values())
    if len(distinct) != 1:
        raise InternalConsistencyError(
            f"beta2 from genus depends on the permutation: {values}")
    val = distinct.pop()
    if val.denominator != 1 or val < 0:
        raise InternalConsistencyError(f"bad beta2 value {val}")
    beta2 = int(val)
    min_sub = min(min(vals) for vals in report.subgenera.values())
    if beta2 > min_sub:
        raise InternalConsistencyError(
            f"beta2 {beta2} exceeds some subgenus {min_sub}")
    hom = homology(g)
    if hom.betti2 != beta2:
        raise InternalConsistencyError(
            f"beta2 mismatch: genus route {beta2}, homology {hom.betti2}")
    return beta2
