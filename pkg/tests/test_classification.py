import itertools

import pytest

from gemkit import classification, core, fixtures, genus, invariants
from gemkit.errors import AnalysisRefused, StructuralError


def test_t_values_sigma5_and_cp2_all_zero():
    assert set(classification.t_values(fixtures.sigma(5)).values()) == {0}
    assert set(classification.t_values(fixtures.cp2()).values()) == {0}
    assert len(classification.t_values(fixtures.cp2())) == 10


def test_t_values_require_crystallization():
    with pytest.raises(StructuralError):
        classification.t_values(core.add_dipole(fixtures.sigma(5), 0, (0,)))


def test_dipole_augmented_cp2_gets_positive_t():
    # a 2-dipole keeps the gem contracted but splits one triple residue
    g = core.add_dipole(fixtures.cp2(), 0, (0, 1))
    t = classification.t_values(g)
    assert t[(2, 3, 4)] == 1
    assert sum(t.values()) >= 1


def test_weak_simple_witnesses():
    assert len(classification.detect_weak_simple(fixtures.sigma(5))) == 12
    assert len(classification.detect_weak_simple(fixtures.cp2())) == 12
    assert classification.detect_simple(fixtures.sigma(5))
    assert classification.detect_simple(fixtures.cp2())
    assert classification.detect_simple(fixtures.rp3_boundary())


def test_weak_simple_refuses_nontrivial_pi1():
    with pytest.raises(AnalysisRefused):
        classification.detect_weak_simple(fixtures.nonsimply_connected())


def test_not_simple_when_some_t_positive():
    g = core.add_dipole(fixtures.cp2(), 0, (0, 1))
    assert not classification.detect_simple(g)


def test_residuals_zero_on_fixtures():
    for g in (fixtures.sigma(5), fixtures.cp2(), fixtures.rp3_boundary(),
              core.connected_sum(fixtures.cp2(), fixtures.cp2())):
        for eps in genus.all_cyclic_permutations(5):
            assert classification.genus_subgenus_residuals(g, eps) == (0,) * 5


def test_residuals_zero_on_corpus(crystallization_corpus_order6):
    for g in crystallization_corpus_order6:
        if invariants.pi1_certificate(g).status != "trivial":
            continue
        for eps in genus.all_cyclic_permutations(5):
            assert classification.genus_subgenus_residuals(g, eps) == (0,) * 5


def test_weak_simple_characterizations_agree(crystallization_corpus_order6):
    gems = list(crystallization_corpus_order6) + \
        [fixtures.cp2(), fixtures.rp3_boundary(),
         core.add_dipole(fixtures.cp2(), 0, (0, 1))]
    for g in gems:
        if invariants.pi1_certificate(g).status != "trivial":
            continue
        classification.weak_simple_consistency(g)  # raises on disagreement


def test_bounds_sigma5_and_cp2():
    b = classification.check_bounds(fixtures.sigma(5))
    assert (b.rho, b.two_beta2, b.two_chi_minus_4) == (0, 0, 0)
    assert b.equality and b.genus_invariant_certified and b.weak_simple
    b = classification.check_bounds(fixtures.cp2())
    assert (b.rho, b.two_beta2, b.two_chi_minus_4) == (2, 2, 2)
    assert b.equality and b.genus_invariant_certified


def test_bounds_strict_on_non_weak_simple_variant():
    g = core.add_dipole(fixtures.cp2(), 0, (0, 1))
    b = classification.check_bounds(g)
    assert b.two_beta2 == 2
    if not b.weak_simple:
        assert b.rho > b.two_beta2 and not b.equality
    else:
        assert b.rho == b.two_beta2
    # regardless: every permutation without a witness sits strictly above
    witnesses = set(classification.detect_weak_simple(g))
    rep = genus.genus_all(g)
    for eps in genus.all_cyclic_permutations(5):
        if eps not in witnesses:
            assert rep.rho[eps] > b.two_beta2


def test_full_report_assembles():
    rep = classification.classification_report(fixtures.cp2())
    data = rep.to_json()
    assert data["simple"] is True
    assert len(data["weak_simple_witnesses"]) == 12
    assert data["bounds"]["genus_invariant_certified"] is True
    assert not data["conditional"]
