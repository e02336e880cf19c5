"""Regular genus of gems with respect to cyclic color permutations.

A k-colored gem embeds regularly into a closed surface for every cyclic
ordering eps of its colors; the embedding surface is orientable exactly
when the graph is bipartite, and its (half-)genus rho_eps satisfies

    2 - 2*rho_eps = sum_j g_{eps_j, eps_{j+1}} + (1 - n) * p'

where n = k - 1, the sum runs over consecutive color pairs of eps, and the
graph has 2*p' vertices.  All arithmetic is exact; non-bipartite graphs get
half-integral genera as Fractions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import core
from .errors import InternalConsistencyError, StructuralError


@dataclass(frozen=True)
class CyclicPermutation:
    """Cyclic ordering of the color set, stored canonically: the top color
    sits last and the sequence is lexicographically minimal among itself
    and its reversal (a cycle and its inverse induce the same embedding)."""

    seq: tuple[int, ...]

    @classmethod
    def canonical(cls, seq) -> "CyclicPermutation":
        seq = tuple(seq)
        k = len(seq)
        if sorted(seq) != list(range(k)):
            raise StructuralError(f"{seq} is not a permutation of 0..{k - 1}")
        i = seq.index(k - 1)
        rot = seq[i + 1:] + seq[:i + 1]
        rev = tuple(reversed(rot[:-1])) + (k - 1,)
        return cls(min(rot, rev))

    @property
    def n_colors(self) -> int:
        return len(self.seq)

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Consecutive color pairs, cyclically."""
        k = len(self.seq)
        return tuple((self.seq[i], self.seq[(i + 1) % k]) for i in range(k))

    def delete(self, i: int) -> tuple[int, ...]:
        """Induced cyclic order on the remaining colors after dropping
        position i (not re-canonicalized; only the cyclic order matters)."""
        return self.seq[i + 1:] + self.seq[:i]

    def inverse(self) -> "CyclicPermutation":
        return CyclicPermutation.canonical(tuple(reversed(self.seq)))

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.seq) + ")"


@lru_cache(maxsize=None)
def all_cyclic_permutations(n_colors: int) -> tuple[CyclicPermutation, ...]:
    """All canonical cyclic orderings of 0..n_colors-1 (k!/2 /k classes;
    12 for five colors, 3 for four, 1 for three)."""
    top = n_colors - 1
    out = []
    for perm in itertools.permutations(range(top)):
        if perm <= tuple(reversed(perm)):
            out.append(CyclicPermutation(perm + (top,)))
    return tuple(sorted(out, key=lambda e: e.seq))


def _as_permutation(g: core.ColoredGraph, eps) -> CyclicPermutation:
    if isinstance(eps, CyclicPermutation):
        perm = eps
    else:
        perm = CyclicPermutation.canonical(tuple(eps))
    if perm.n_colors != g.n_colors:
        raise StructuralError("permutation does not match the graph's color set")
    return perm


def genus_of_sequence(g: core.ColoredGraph, seq: tuple[int, ...]) -> Fraction:
    """rho of g with respect to an explicit cyclic color sequence.

    Helper shared by genus_wrt and the induced (deleted-color) orders of
    subgenus computations; ``seq`` need not be in canonical form.
    """
    if not core.is_connected(g):
        raise StructuralError("genus requires a connected graph")
    k = len(seq)
    n = k - 1
    p_half = g.order // 2
    if k == 1:
        return Fraction(0)
    total = 0
    for i in range(k):
        a, b = seq[i], seq[(i + 1) % k]
        if k == 2:
            # the two "consecutive pairs" of a 2-cycle coincide
            total = 2 * core.residue_count(g, (a, b))
            break
        total += core.residue_count(g, (a, b))
    val = 2 - total - (1 - n) * p_half
    rho = Fraction(val, 2)
    if rho < 0:
        raise StructuralError(f"negative genus {rho}: input is not a gem")
    if core.is_bipartite(g) and rho.denominator != 1:
        raise InternalConsistencyError(f"bipartite graph with half-integral genus {rho}")
    return rho


def genus_wrt(g: core.ColoredGraph, eps) -> Fraction:
    """Regular genus of g with respect to the cyclic permutation eps.

    Integer for bipartite graphs, otherwise a nonnegative multiple of 1/2.
    """
    return genus_of_sequence(g, _as_permutation(g, eps).seq)


def subgenus(g: core.ColoredGraph, eps, i: int) -> Fraction:
    """Genus of the residue(s) missing color eps[i], w.r.t. the induced order.

    When several residues exist (non-contracted input) the value is the sum
    of the component genera; genus_all flags that case.
    """
    perm = _as_permutation(g, eps)
    if not 0 <= i < perm.n_colors:
        raise StructuralError("subgenus position out of range")
    sub_seq = perm.delete(i)
    total = Fraction(0)
    for res in core.extract_residues(g, sub_seq):
        pos = {c: idx for idx, c in enumerate(res.key)}
        total += genus_of_sequence(res.graph, tuple(pos[c] for c in sub_seq))
    return total


@dataclass
class GenusReport:
    """Regular genus data for every canonical permutation.

    ``rho`` maps each permutation to its genus; ``subgenera`` maps it to the
    tuple of deleted-color residue genera in position order.
    ``residues_connected`` is False when some top residue is disconnected
    (non-contracted input), in which case subgenera are component sums.
    """

    orientable: bool
    rho: dict
    regular_genus: Fraction
    subgenera: dict
    residues_connected: bool
    min_witnesses: tuple

    def to_json(self) -> dict:
        return {
            "orientable": self.orientable,
            "rho": {str(e): fraction_json(v) for e, v in self.rho.items()},
            "regular_genus": fraction_json(self.regular_genus),
            "subgenera": {str(e): [fraction_json(v) for v in vals]
                          for e, vals in self.subgenera.items()},
            "residues_connected": self.residues_connected,
            "min_witnesses": [str(e) for e in self.min_witnesses],
        }


def fraction_json(v: Fraction):
    """JSON rendering of exact genera: int when integral, 'a/b' otherwise."""
    v = Fraction(v)
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@lru_cache(maxsize=None)
def genus_all(g: core.ColoredGraph) -> GenusReport:
    """Genus for every canonical permutation plus all subgenera."""
    perms = all_cyclic_permutations(g.n_colors)
    rho = {e: genus_wrt(g, e) for e in perms}
    sub = {e: tuple(subgenus(g, e, i) for i in range(g.n_colors)) for e in perms}
    regular = min(rho.values())
    connected = all(core.residue_count(g, core.complement_key((c,), g.n_colors)) == 1
                    for c in g.colors)
    return GenusReport(
        orientable=core.is_bipartite(g),
        rho=rho,
        regular_genus=regular,
        subgenera=sub,
        residues_connected=connected,
        min_witnesses=tuple(e for e in perms if rho[e] == regular),
    )
