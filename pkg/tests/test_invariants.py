import itertools
import random

import pytest

from gemkit import classification, core, fixtures, genus, invariants, recognition
from gemkit.errors import AnalysisRefused, StructuralError

from conftest import chi_by_counting, random_augment


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def test_snf_known_cases():
    assert invariants.smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, 4, 16]]) == \
        (2, 2, 156)
    assert invariants.smith_normal_form([[1, 0], [0, 1]]) == (1, 1)
    assert invariants.smith_normal_form([[0, 0], [0, 0]]) == ()
    assert invariants.smith_normal_form([[2]]) == (2,)
    assert invariants.smith_normal_form([[6, 4]]) == (2,)


def test_snf_against_sympy_on_random_matrices():
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    rng = random.Random(11)
    for trial in range(60):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        ours = invariants.smith_normal_form(m)
        ref = sympy_snf(sympy.Matrix(m))
        diag = [abs(ref[i, i]) for i in range(min(rows, cols))]
        assert list(ours) == [d for d in diag if d != 0]


def test_snf_divisibility_chain():
    rng = random.Random(12)
    for _ in range(40):
        m = [[rng.randint(-20, 20) for _ in range(4)] for _ in range(4)]
        factors = invariants.smith_normal_form(m)
        for a, b in zip(factors, factors[1:]):
            assert b % a == 0


# ---------------------------------------------------------------------------
# Euler characteristics
# ---------------------------------------------------------------------------

def test_euler_characteristic_examples():
    assert invariants.euler_characteristic(fixtures.sigma(5)) == 2
    assert invariants.euler_characteristic(fixtures.torus()) == 0
    assert invariants.euler_characteristic(fixtures.cp2()) == 3
    assert invariants.euler_characteristic(fixtures.rp3()) == 0
    g = fixtures.rp3_boundary()
    assert invariants.euler_characteristic(g) == chi_by_counting(g) == 3


def test_euler_via_genus_matches_and_is_permutation_free():
    assert invariants.euler_via_genus(fixtures.sigma(5)) == 2
    assert invariants.euler_via_genus(fixtures.cp2()) == 3
    assert invariants.euler_via_genus(fixtures.rp3_boundary()) == 3
    eps = genus.all_cyclic_permutations(5)[3]
    assert invariants.euler_via_genus(fixtures.cp2(), eps) == 3


def test_euler_via_genus_refuses_non_crystallization():
    g = core.add_dipole(fixtures.sigma(5), 0, (0,))
    with pytest.raises(StructuralError):
        invariants.euler_via_genus(g)


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

def test_presentation_counts_match_residues():
    for g in (fixtures.sigma(5), fixtures.cp2(), fixtures.rp3()):
        for i, j in itertools.combinations(range(g.n_colors), 2):
            pres = invariants.presentation_raw(g, i, j)
            comp = core.complement_key((i, j), g.n_colors)
            assert pres.generator_count == core.residue_count(g, comp)
            assert len(pres.relators) == core.residue_count(g, (i, j))
            n_i = core.residue_count(g, core.complement_key((i,), g.n_colors))
            n_j = core.residue_count(g, core.complement_key((j,), g.n_colors))
            assert len(pres.tree_relators) == n_i + n_j - 1


def test_sigma5_presentation_trivializes():
    pres = invariants.pi1_presentation(fixtures.sigma(5))
    assert pres.generator_count == 1
    assert invariants.h1_from_presentation(pres) == (0, ())
    assert invariants.tietze_trivializes(pres)


def test_cp2_presentation_trivializes():
    pres = invariants.pi1_presentation(fixtures.cp2())
    assert invariants.h1_from_presentation(pres) == (0, ())
    assert invariants.tietze_trivializes(pres)


def test_rp3_abelianization_is_z2():
    pres = invariants.presentation_raw(fixtures.rp3(), 0, 1)
    assert invariants.h1_from_presentation(pres) == (0, (2,))
    assert not invariants.tietze_trivializes(pres)


def test_presentation_flavor_validation():
    bdy = fixtures.rp3_boundary()
    with pytest.raises(StructuralError):
        invariants.pi1_presentation(bdy, 0, 4, flavor=invariants.COMPACT)
    with pytest.raises(StructuralError):
        invariants.pi1_presentation(bdy, 0, 1, flavor=invariants.SINGULAR)
    compact = invariants.pi1_presentation(bdy, 0, 1, flavor=invariants.COMPACT)
    hat = invariants.pi1_presentation(bdy, 0, 4, flavor=invariants.SINGULAR)
    assert invariants.h1_from_presentation(compact) == (0, ())
    assert invariants.h1_from_presentation(hat) == (0, ())


def test_presentation_text_export():
    pres = invariants.pi1_presentation(fixtures.sigma(5))
    text = pres.to_text()
    lines = text.splitlines()
    assert lines[0] == "gens: x1"
    assert len(lines) == 1 + len(pres.all_relators())


# ---------------------------------------------------------------------------
# Dual-oracle homology
# ---------------------------------------------------------------------------

def test_h1_oracles_agree_on_mixed_corpus(small_manifold_corpus):
    for g in small_manifold_corpus:
        sing = recognition.singular_colors(g)
        pair = [c for c in g.colors if c in sing or c == max(
            [x for x in g.colors if x not in sing][:1] + list(sing))]
        # route A on the singular model: singular colors inside the pair
        j = sing[0] if sing else 1
        i = next(c for c in g.colors if c != j)
        a = invariants.h1_from_presentation(invariants.presentation_raw(g, i, j))
        b = invariants.h1_via_edge_path(g)
        assert a == b


def test_homology_reports():
    s5 = invariants.homology(fixtures.sigma(5))
    assert (s5.betti1, s5.betti2, s5.chi_singular) == (0, 0, 2)
    assert s5.torsion == ()
    cp2 = invariants.homology(fixtures.cp2())
    assert (cp2.betti1, cp2.betti2, cp2.chi_singular) == (0, 1, 3)
    bdy = invariants.homology(fixtures.rp3_boundary())
    assert (bdy.betti1, bdy.betti2, bdy.betti1_singular) == (0, 1, 0)
    assert bdy.chi_singular == 3


def test_homology_connected_sum_additivity():
    cp2 = fixtures.cp2()
    s = cp2
    for k in range(2, 5):
        s = core.connected_sum(s, cp2)
        hom = invariants.homology(s)
        assert hom.betti2 == k and hom.betti1 == 0
        assert hom.chi_singular == 2 + k


def test_homology_rejects_non_manifold():
    with pytest.raises(StructuralError):
        invariants.homology(fixtures.torus_times_colors())


# ---------------------------------------------------------------------------
# Certificates and the genus route to betti2
# ---------------------------------------------------------------------------

def test_pi1_certificates():
    assert invariants.pi1_certificate(fixtures.sigma(5)).status == "trivial"
    assert invariants.pi1_certificate(fixtures.cp2()).status == "trivial"
    assert invariants.pi1_certificate(fixtures.rp3_boundary()).status == "trivial"
    cert = invariants.pi1_certificate(fixtures.nonsimply_connected())
    assert cert.status == "nontrivial" and cert.m == 1


def test_boundary_sum_of_simply_connected_stays_simply_connected():
    # the boundary H1 (Z/2 + Z/2 after the sum) dies in the 4-manifold
    bdy = fixtures.rp3_boundary()
    double = core.connected_sum(bdy, bdy)
    assert invariants.pi1_certificate(double).status == "trivial"
    res = core.extract_residues(double, (0, 1, 2, 3))[0].graph
    assert invariants.h1_via_edge_path(res) == (0, (2, 2))


def test_beta2_via_genus_values_and_refusal():
    assert invariants.beta2_via_genus(fixtures.sigma(5)) == 0
    assert invariants.beta2_via_genus(fixtures.cp2()) == 1
    s = core.connected_sum(fixtures.cp2(), fixtures.cp2())
    assert invariants.beta2_via_genus(s) == 2
    with pytest.raises(AnalysisRefused):
        invariants.beta2_via_genus(fixtures.nonsimply_connected())


def test_beta2_never_exceeds_subgenera(crystallization_corpus_order6):
    for g in crystallization_corpus_order6:
        cert = invariants.pi1_certificate(g)
        if cert.status != "trivial":
            continue
        beta2 = invariants.beta2_via_genus(g)
        rep = genus.genus_all(g)
        for eps in rep.subgenera:
            assert all(beta2 <= s for s in rep.subgenera[eps])
