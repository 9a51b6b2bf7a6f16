"""Tests for soliton residuals, certificates and the polynomial solver"""
from fractions import Fraction

import pytest

from catalog import metric
from forms import VectorField
from report import printed_membership
from ring import parse_scalar, sym
from soliton import (AnsatzTooLarge, Classification, ExtendedScalar, NoSolution, ansatz_unknowns, check_theorem,
                     classify, dense_rank, field_support, is_zero_tensor, naive_killing_matrix, nonzero_entries,
                     parse_extended, pde_system, printed_candidate, residual, solve_soliton, substitute)

x, y, z, w = (sym(c) for c in "xyzw")


def test_classify():
    assert classify(Fraction(-6)) is Classification.SHRINKING
    assert classify(0) is Classification.STEADY
    assert classify(parse_scalar("3*mu")) is Classification.EXPANDING
    assert classify(parse_scalar("-3/lambda")) is Classification.SHRINKING
    assert classify(parse_scalar("lambda - 1")) is Classification.PARAMETER_DEPENDENT
    assert classify(parse_scalar("-3*a2/a1"), {"a1": 1, "a2": 2}) is Classification.SHRINKING
    assert classify(sym("alpha")) is Classification.PARAMETER_DEPENDENT


def test_extended_scalar_derivatives():
    f = parse_extended("x*cos(w) + 2*sin(w) + y")
    assert f.partial("w") == parse_extended("-x*sin(w) + 2*cos(w)")
    assert f.partial("x") == parse_extended("cos(w)")
    assert f.partial("y") == 1
    assert not ExtendedScalar({"cos": 0})
    with pytest.raises(ValueError):
        parse_extended("cos(x)")
    with pytest.raises(ValueError):
        parse_extended("cos(w)") * parse_extended("sin(w)")


def test_ansatz_size():
    assert len(ansatz_unknowns(1, False)) == 20
    assert len(ansatz_unknowns(2, False)) == 60
    assert len(ansatz_unknowns(1, True)) == 20 + 4 * 2 * 4


def test_support_restricts_the_ansatz():
    g = metric("euclidean")
    X = VectorField([parse_scalar("C1*x*y + 1"), parse_scalar("0"), parse_scalar("C2*z"), parse_scalar("0")],
                    g.frame_g.basis)
    support = field_support(X)
    assert len(support) == 3
    assert {u.key for u in ansatz_unknowns(2, False, support)} == set(support)
    assert (0, "1", (1, 1, 0, 0)) in support


def test_homothety_residual():
    g = metric("euclidean")
    X = VectorField([-x / 2, -y / 2, -z / 2, -w / 2], g.frame_g.basis)
    assert is_zero_tensor(residual(g, X, 1))
    assert not is_zero_tensor(residual(g, X, 2))


def test_euclidean_killing_dimension():
    g = metric("euclidean")
    space = solve_soliton(g, 1, alpha=0)
    assert space.dimension == 10
    assert space.verify()
    assert 20 - dense_rank(naive_killing_matrix(g, 1)) == 10


def test_column_order_does_not_change_the_space():
    g = metric("euclidean")
    forward = solve_soliton(g, 1, alpha=0)
    backward = solve_soliton(g, 1, alpha=0, column_order=list(range(19, -1, -1)))
    assert backward.dimension == forward.dimension
    for X, _ in backward.basis_fields():
        assert forward.contains(X, 0)


def test_no_constant_homothety():
    with pytest.raises(NoSolution):
        solve_soliton(metric("euclidean"), 0, alpha=1)


def test_ansatz_cap():
    with pytest.raises(AnsatzTooLarge) as info:
        solve_soliton(metric("euclidean"), 1, max_unknowns=10)
    assert info.value.unknowns == 21


def test_bad_degree_and_order():
    g = metric("euclidean")
    with pytest.raises(ValueError):
        solve_soliton(g, 9)
    with pytest.raises(ValueError):
        solve_soliton(g, 0, alpha=0, column_order=[0, 1])


@pytest.mark.parametrize("binding,alpha", [
    ({"a1": 1, "a2": 2, "a3": -1}, 6),
    ({"a1": 1, "a2": 3, "a3": -1}, 9),
    ({"a1": -1, "a2": 2, "a3": 1}, -6),
])
def test_general_form_forces_alpha(binding, alpha):
    space = solve_soliton(metric("general_diag", binding), 2)
    assert space.alpha == alpha
    assert space.alpha_forced
    assert space.verify()


def test_g_mu_is_shrinking_when_solved():
    space = solve_soliton(metric("g_mu", {"mu": 2}), 2)
    assert space.alpha == -6
    assert classify(space.alpha) is Classification.SHRINKING


def test_pde_rendering():
    equations = {(e.i, e.j): e for e in pde_system(metric("g0_1"))}
    assert equations[(3, 3)].render() == "1 + (L_X g)_44 = 0"
    assert equations[(0, 0)].render() == "(L_X g)_11 + α = 0"
    assert equations[(3, 3)].nontrivial
    assert len(equations) == 10


def _residual_entries(certificate):
    return {(a, b): value for a, b, value in nonzero_entries(certificate.residual)}


def _entry_items(certificate):
    return [item for item in certificate.discrepancies if item["entry"] != "alpha"]


def _without(candidate, binding, basis=None):
    components = [substitute(c, binding) for c in candidate.X.components]
    return VectorField(components, basis or candidate.X.basis)


def test_steady_field_fails_through_its_c2_terms():
    (certificate,) = check_theorem(8)
    assert not certificate.is_soliton
    assert _residual_entries(certificate) == {(0, 0): parse_scalar("-2*C2*x^2")}
    assert certificate.failing_terms == ["C2"]
    (item,) = _entry_items(certificate)
    assert item["entry"] == "(1,1)"
    assert "C2 = 0" in item["note"]
    assert certificate.resolution.matches_shape
    assert certificate.verified
    assert certificate.candidate.alpha == 0
    assert any("shrinking" in note for note in certificate.notes)


def test_steady_field_without_c2_is_in_the_solution_space():
    g = metric("g2_lambda", {"lambda": 3})
    candidate = printed_candidate(8, "g2_lambda")
    X = _without(candidate, {"C2": 0, "lambda": 3}, g.frame_g.basis)
    space = solve_soliton(g, 4, alpha=0)
    assert space.contains(X, 0)
    assert classify(space.alpha) is Classification.STEADY
    assert is_zero_tensor(residual(candidate.metric, _without(candidate, {"C2": 0}), 0))


def test_trig_field_is_a_soliton():
    (certificate,) = check_theorem(3)
    assert certificate.is_soliton
    assert certificate.verified
    assert certificate.resolution is None
    assert certificate.failing_terms == []
    assert certificate.classification is Classification.PARAMETER_DEPENDENT


def test_trig_field_is_in_the_trig_solution_space():
    assert printed_membership(solve_soliton(metric("g0_1"), 2, trig=True)) is True


@pytest.mark.parametrize("n,family_id,entries,dimension", [
    (4, "g0_2", {(1, 1): "4*y*w*C1", (1, 3): "y^2*C1"}, 11),
    (5, "g0_3", {(0, 1): "y*C1/2", (1, 1): "x*C1"}, 7),
])
def test_fields_fail_only_through_c1(n, family_id, entries, dimension):
    (certificate,) = check_theorem(n)
    assert not certificate.is_soliton
    assert _residual_entries(certificate) == {key: parse_scalar(text) for key, text in entries.items()}
    assert certificate.failing_terms == ["C1"]
    assert all("C1 = 0" in item["note"] for item in _entry_items(certificate))
    assert certificate.resolution.dimension == dimension
    assert certificate.resolution.matches_shape
    assert certificate.verified
    candidate = printed_candidate(n, family_id)
    assert is_zero_tensor(residual(candidate.metric, _without(candidate, {"C1": 0}), candidate.alpha))


def test_g1_lambda_field_needs_a_substitute():
    (certificate,) = check_theorem(7)
    assert not certificate.is_soliton
    assert _residual_entries(certificate) == {(0, 1): parse_scalar("-2*C2"), (1, 1): parse_scalar("1/lambda")}
    assert certificate.failing_terms == ["1", "C2"]
    assert {item["entry"] for item in _entry_items(certificate)} == {"(1,2)", "(2,2)"}
    assert all("note" in item for item in _entry_items(certificate))
    assert certificate.resolution.dimension == 5
    assert certificate.resolution.matches_shape
    assert certificate.verified


def test_sign_conflict_is_resolved_by_the_solver():
    certificates = {c.family: c for c in check_theorem(2)}
    expected = {"g_lambda_plus": 6, "g_lambda_minus": -6, "g_mu": -6}
    for family_id, alpha in expected.items():
        certificate = certificates[family_id]
        assert not certificate.is_soliton
        assert certificate.resolution.alpha == alpha
        assert certificate.resolution.verified
        assert certificate.resolution.matches_shape
        assert certificate.verified
        (item,) = [d for d in certificate.discrepancies if d["entry"] == "alpha"]
        assert "3*a2/a1" in item["note"]
    assert certificates["g_mu"].classification is Classification.EXPANDING


def test_unknown_theorem():
    with pytest.raises(KeyError):
        check_theorem(6)
