"""Tests for the group and metric catalog"""
from fractions import Fraction

import pytest

from catalog import (THEOREM_FAMILIES, ConstraintViolation, SignatureNotLorentz, UnknownFamily, families, family,
                     group, groups, inertia, law_fixes_frame, metric, parse_coordinate_metric,
                     printed_heisenberg_inverse, printed_heisenberg_law)
from forms import UnknownGroup
from ring import parse_scalar, sym
from utils import load_fixtures


def _rationals(g):
    return [[value.as_rational() for value in row] for row in g.frame_g.components]


def test_census():
    assert groups() == ["H3xR", "G4"]
    assert len(families()) == 13
    assert len(families("H3xR")) == 6
    assert [f.id for f in families("G4")] == [
        "gA_plus", "gA_minus", "gA", "g1_lambda", "g2_lambda", "g3_lambda", "g4_lambda"]
    assert len(families(include_reference=True)) == 17
    assert "R4" in groups(include_reference=True)


def test_theorem_families_are_catalogued():
    for members in THEOREM_FAMILIES.values():
        for family_id in members:
            assert not family(family_id).reference


def test_unknown_ids():
    with pytest.raises(UnknownFamily):
        family("g9")
    with pytest.raises(UnknownGroup):
        group("SU2")


def test_sample_bindings_are_lorentzian():
    for fam in families():
        g = metric(fam.id, fam.sample_binding)
        assert g.family == fam.id


def test_constraints():
    with pytest.raises(ConstraintViolation):
        metric("g_mu", {"mu": Fraction(-1)})
    with pytest.raises(ConstraintViolation):
        metric("g_mu", {"lambda": Fraction(1)})
    with pytest.raises(ConstraintViolation):
        metric("gA_plus", {"a": Fraction(1), "b": Fraction(2), "c": Fraction(1)})


def test_reference_signatures():
    assert inertia(_rationals(metric("euclidean"))) == (4, 0, 0)
    assert inertia(_rationals(metric("minkowski"))) == (3, 1, 0)
    err = SignatureNotLorentz("g", (2, 2, 0))
    assert "g" in str(err)


def test_inertia():
    assert inertia([[0, 1], [1, 0]]) == (1, 1, 0)
    assert inertia([[1, 0], [0, 0]]) == (1, 0, 1)
    assert inertia([[2, 1], [1, 2]]) == (2, 0, 0)


def test_metric_cache_and_symbolic_bindings():
    a = metric("g_mu", {"mu": Fraction(2)})
    assert a is metric("g_mu", {"mu": 2})
    g = metric("general_diag", {"a1": "1", "a2": "lambda", "a3": "-1"})
    assert g.frame_g.components[2][2] == sym("lambda")
    assert not g.fully_bound


def test_general_form_in_coordinates():
    g = metric("general_diag").g.components
    assert g[1][1] == parse_scalar("a1 + a2*x^2")
    assert g[1][2] == parse_scalar("-a2*x")
    assert g[2][2] == sym("a2")
    assert g[3][3] == sym("a3")


def test_every_family_has_a_printed_coordinate_metric():
    assert set(load_fixtures()["coordinate_metrics"]) == {f.id for f in families()}


@pytest.mark.parametrize("family_id", [f.id for f in families()])
def test_printed_coordinate_metrics(family_id):
    text = load_fixtures()["coordinate_metrics"][family_id]
    assert parse_coordinate_metric(text) == metric(family_id).g


def test_registered_laws_fix_the_frame():
    for group_id in ("H3xR", "G4", "R4"):
        assert law_fixes_frame(group_id, (1, 2, 3, 4)) == []
        assert law_fixes_frame(group_id, (Fraction(-1, 2), 5, 0, 7)) == []


def test_printed_heisenberg_law_moves_the_frame():
    moved = law_fixes_frame("H3xR", (1, 2, 3, 4), printed_heisenberg_law, printed_heisenberg_inverse)
    assert 1 in moved


def test_structure_constants():
    assert group("H3xR").bracket_constant(0, 1, 2) == 1
    assert group("H3xR").bracket_constant(1, 0, 2) == -1
    assert group("G4").bracket_constant(0, 2, 3) == 1
    assert group("G4").bracket_constant(1, 2, 3) == 0
    assert group("R4").structure_constants == {}
