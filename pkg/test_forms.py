"""Tests for exterior forms, vector fields and symmetric tensors"""
import random
from fractions import Fraction

import pytest

import catalog  # noqa: F401  registers the group frames
from forms import (COORDINATE, PLACEHOLDER_NAMES, Basis, BasisMismatch, DegreeOverflow, KForm, LinearDiffExpr,
                   SymTensor2, VectorField, change_basis, identity, lie_bracket, lie_derivative_metric,
                   lie_derivative_template, pairing)
from ring import ONE, ZERO, Scalar, parse_scalar, sym

x, y, z, w = (sym(c) for c in "xyzw")
H3 = Basis.frame("H3xR")
G4 = Basis.frame("G4")


def random_poly(rng: random.Random) -> Scalar:
    total = ZERO
    for _ in range(3):
        term = Scalar.const(Fraction(rng.randint(-4, 4)))
        for _ in range(rng.randint(0, 3)):
            term = term * sym(rng.choice("xyzw"))
        total = total + term
    return total


def test_wedge_is_antisymmetric():
    dx, dy = KForm.basic([0]), KForm.basic([1])
    assert dx.wedge(dy) == -(dy.wedge(dx))
    assert dx.wedge(dx).is_zero()
    assert KForm.basic([1, 0]) == -KForm.basic([0, 1])


def test_degree_overflow():
    top = KForm.basic([0, 1, 2, 3])
    with pytest.raises(DegreeOverflow):
        top.wedge(KForm.basic([0, 1]))


def test_d_squared_vanishes():
    rng = random.Random(3)
    for _ in range(10):
        form = KForm.one_form([random_poly(rng) for _ in range(4)])
        assert form.exterior_derivative().exterior_derivative().is_zero()
        two = form.wedge(KForm.one_form([random_poly(rng) for _ in range(4)]))
        assert two.exterior_derivative().exterior_derivative().is_zero()


def test_leibniz_rule():
    rng = random.Random(5)
    a = KForm.one_form([random_poly(rng) for _ in range(4)])
    b = KForm.one_form([random_poly(rng) for _ in range(4)])
    lhs = a.wedge(b).exterior_derivative()
    rhs = a.exterior_derivative().wedge(b) - a.wedge(b.exterior_derivative())
    assert lhs == rhs


def test_heisenberg_coframe_in_coordinates():
    omega3 = change_basis(KForm.basic([2], H3), COORDINATE)
    assert omega3 == KForm.one_form([ZERO, -x, ONE, ZERO])
    assert KForm.basic([2], H3).exterior_derivative() == -KForm.basic([0, 1], H3)


def test_filiform_structure_equations():
    assert KForm.basic([3], G4).exterior_derivative() == -KForm.basic([0, 2], G4)
    omega4 = change_basis(KForm.basic([3], G4), COORDINATE)
    assert omega4 == KForm.one_form([ZERO, x * x / 2, -x, ONE])


def test_frame_and_coframe_are_dual():
    for basis in (H3, G4):
        for i in range(4):
            for j in range(4):
                expected = ONE if i == j else ZERO
                assert pairing(KForm.basic([i], basis), VectorField.basis_field(j, basis)) == expected


def test_brackets():
    X = [VectorField.basis_field(i, H3) for i in range(4)]
    assert lie_bracket(X[0], X[1]) == X[2]
    assert lie_bracket(X[1], X[0]) == -X[2]
    assert lie_bracket(X[0], X[2]).is_zero()
    Y = [VectorField.basis_field(i, G4) for i in range(4)]
    assert lie_bracket(Y[0], Y[2]) == Y[3]


def test_basis_mismatch():
    with pytest.raises(BasisMismatch):
        KForm.basic([0], H3) + KForm.basic([0])


def test_tensor_round_trip_through_frame():
    g = SymTensor2([[ONE, ZERO, ZERO, ZERO], [ZERO, ONE, ZERO, ZERO],
                    [ZERO, ZERO, sym("lambda"), ZERO], [ZERO, ZERO, ZERO, -ONE]], H3)
    coordinate = change_basis(g, COORDINATE)
    assert coordinate.components[1][1] == 1 + sym("lambda") * x * x
    assert coordinate.components[1][2] == -sym("lambda") * x
    assert change_basis(coordinate, H3) == g


def test_rotation_is_killing_for_flat_metric():
    flat = SymTensor2(identity())
    rotation = VectorField([-y, x, ZERO, ZERO])
    assert lie_derivative_metric(rotation, flat).is_zero()
    dilation = VectorField([x, y, z, w])
    assert lie_derivative_metric(dilation, flat) == flat.scale(2)


def test_template_agrees_with_direct_lie_derivative():
    from catalog import metric

    rng = random.Random(13)
    for family_id in ("g0_1", "g1_lambda"):
        g = metric(family_id)
        components = [random_poly(rng) for _ in range(4)]
        direct = lie_derivative_metric(VectorField(components, g.frame_g.basis), g.g)
        template = lie_derivative_template(g.frame_g, "frame")
        for a in range(4):
            for b in range(4):
                assert template[a][b].apply(components) == direct.components[a][b]
        coordinate = lie_derivative_template(g.g, "coordinate")
        direct = lie_derivative_metric(VectorField(components), g.g)
        assert coordinate[1][3].apply(components) == direct.components[1][3]


def test_frame_reading_needs_a_frame_tensor():
    with pytest.raises(BasisMismatch):
        lie_derivative_template(SymTensor2(identity()), "frame")
    with pytest.raises(ValueError):
        lie_derivative_template(SymTensor2(identity()), "polar")


def test_placeholder_parsing():
    expr = parse_scalar("2*P1_x - x*P3 + (1 + x^2)*P2_y", names=PLACEHOLDER_NAMES)
    expected = LinearDiffExpr({(0, "x"): Scalar.const(2), (2, ""): -x, (1, "y"): 1 + x * x})
    assert expr == expected
    assert LinearDiffExpr.placeholder(0, "x").render() == "P1_x"
    assert (LinearDiffExpr.placeholder(2) * -1).render() == "-P3"
