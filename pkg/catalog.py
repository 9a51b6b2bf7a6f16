"""Registry of the nilpotent groups and their left-invariant metric families"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from forms import (COORDINATE, Basis, KForm, SymTensor2, UnknownGroup, VectorField, change_basis,
                   lie_bracket, pairing, register_frame, zeros)
from ring import (COORDS, ONE, ZERO, EngineError, Scalar, const, parse_scalar,
                  sym)

Binding = Dict[str, Fraction]
BindingValue = Union[Fraction, Scalar]
Point = Sequence[Scalar]
GroupLaw = Callable[[Point, Point], List[Scalar]]


class ConstraintViolation(EngineError):
    def __init__(self, family: str, constraint: str):
        super().__init__(f"{family}: binding violates {constraint}")
        self.family = family
        self.constraint = constraint


class SignatureNotLorentz(EngineError):
    def __init__(self, family: str, inertia: Tuple[int, int, int]):
        pos, neg, null = inertia
        super().__init__(
            f"{family}: signature at the identity is ({pos} positive, {neg} negative, {null} null)"
        )
        self.family = family
        self.inertia = inertia


class NoGroupLaw(EngineError):
    def __init__(self, group: str):
        super().__init__(f"group {group} has no registered group law")
        self.group = group


class UnknownFamily(EngineError):
    def __init__(self, family: str):
        super().__init__(f"unknown metric family: {family!r}")
        self.family = family


@dataclass
class GroupSpec:
    id: str
    frame: List[VectorField]
    coframe: List[KForm]
    structure_constants: Dict[Tuple[int, int, int], Fraction]
    group_law: Optional[GroupLaw] = None
    group_inverse: Optional[Callable[[Point], List[Scalar]]] = None
    description: str = ""

    @property
    def basis(self) -> Basis:
        return Basis.frame(self.id)

    def bracket_constant(self, i: int, j: int, k: int) -> Fraction:
        """c^k_ij with 0-based indices"""
        return self.structure_constants.get((i, j, k), Fraction(0))


@dataclass(frozen=True)
class Constraint:
    expression: str
    relation: str  # ">0" or "<0"

    def __str__(self) -> str:
        return f"{self.expression} {self.relation[0]} 0"

    def holds(self, binding: Mapping[str, Fraction]) -> Optional[bool]:
        """True/False when decidable from the binding, None otherwise"""
        value = parse_scalar(self.expression)
        if not value.free_symbols() <= set(binding):
            return None
        number = value.evaluate(binding)
        return number > 0 if self.relation == ">0" else number < 0


@dataclass
class MetricFamily:
    id: str
    group: str
    title: str
    params: Tuple[str, ...]
    entries: Dict[Tuple[int, int], str]
    constraints: Tuple[Constraint, ...] = ()
    sample_binding: Dict[str, Fraction] = field(default_factory=dict)
    negatives: Optional[int] = 1
    reference: bool = False

    def frame_matrix(self) -> List[List[Scalar]]:
        m = zeros()
        for (i, j), text in self.entries.items():
            value = parse_scalar(text)
            m[i][j] = value
            m[j][i] = value
        return m

    def frame_components(self) -> SymTensor2:
        return SymTensor2(self.frame_matrix(), Basis.frame(self.group))

    def positive_params(self) -> List[str]:
        return [c.expression for c in self.constraints
                if c.relation == ">0" and c.expression in self.params]

    def describe_constraints(self) -> str:
        return ", ".join(str(c) for c in self.constraints) or "none"


@dataclass(eq=False)
class MetricInstance:
    family: str
    binding: Dict[str, BindingValue]
    g: SymTensor2
    group: str
    frame_g: SymTensor2

    @property
    def fully_bound(self) -> bool:
        bound = {k for k, v in self.binding.items() if isinstance(v, Fraction)}
        return set(family(self.family).params) <= bound

    def key(self) -> Optional[tuple]:
        """Cache key, or None when a parameter is bound to an expression"""
        if not all(isinstance(v, Fraction) for v in self.binding.values()):
            return None
        return self.family, tuple(sorted(self.binding.items()))

    def rational_binding(self) -> Binding:
        return {k: v for k, v in self.binding.items() if isinstance(v, Fraction)}


# -- group laws ------------------------------------------------------------

def _heisenberg_law(p: Point, q: Point) -> List[Scalar]:
    x, y, z, w = p
    x2, y2, z2, w2 = q
    return [x + x2, y + y2, z + z2 + x * y2, w + w2]


def _heisenberg_inverse(p: Point) -> List[Scalar]:
    x, y, z, w = p
    return [-x, -y, x * y - z, -w]


def printed_heisenberg_law(p: Point, q: Point) -> List[Scalar]:
    """The law as printed alongside the frame; it does not fix X_2 = d_y + x d_z"""
    x, y, z, w = p
    x2, y2, z2, w2 = q
    return [x + x2, y + y2 + x * z2, z + z2, w + w2]


def printed_heisenberg_inverse(p: Point) -> List[Scalar]:
    x, y, z, w = p
    return [-x, x * z - y, -z, -w]


def _filiform_law(p: Point, q: Point) -> List[Scalar]:
    x, y, z, w = p
    x2, y2, z2, w2 = q
    return [x + x2, y + y2, z + z2 + x * y2, w + w2 + x * z2 + x * x * y2 / 2]


def _filiform_inverse(p: Point) -> List[Scalar]:
    x, y, z, w = p
    return [-x, -y, x * y - z, x * z - w - x * x * y / 2]


def _abelian_law(p: Point, q: Point) -> List[Scalar]:
    return [a + b for a, b in zip(p, q)]


def _abelian_inverse(p: Point) -> List[Scalar]:
    return [-a for a in p]


def _frame_rows(texts: Sequence[Sequence[str]]) -> List[List[Scalar]]:
    return [[parse_scalar(t) for t in row] for row in texts]


_GROUP_FRAMES = {
    # row i = coordinate components of X_i
    "H3xR": (
        [["1", "0", "0", "0"], ["0", "1", "x", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
        _heisenberg_law, _heisenberg_inverse,
        "H3 x R, [X1, X2] = X3",
    ),
    "G4": (
        [["1", "0", "0", "0"], ["0", "1", "x", "x^2/2"], ["0", "0", "1", "x"], ["0", "0", "0", "1"]],
        _filiform_law, _filiform_inverse,
        "G4, [X1, X2] = X3, [X1, X3] = X4",
    ),
    "R4": (
        [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
        _abelian_law, _abelian_inverse,
        "abelian R^4 (reference)",
    ),
}

PRINTED_GROUPS = ("H3xR", "G4")


def _build_group(group_id: str) -> GroupSpec:
    rows, law, inverse_, description = _GROUP_FRAMES[group_id]
    data = register_frame(group_id, _frame_rows(rows))
    basis = Basis.frame(group_id)
    frame = [VectorField(row) for row in data.frame]
    coframe = [KForm.one_form(row) for row in data.coframe]
    for i in range(4):
        for j in range(4):
            expected = ONE if i == j else ZERO
            if pairing(coframe[i], frame[j]) != expected:
                raise EngineError(f"{group_id}: coframe is not dual to the frame at ({i + 1}, {j + 1})")
    constants: Dict[Tuple[int, int, int], Fraction] = {}
    for i in range(4):
        for j in range(4):
            if i == j:
                continue
            bracket = lie_bracket(VectorField.basis_field(i, basis), VectorField.basis_field(j, basis))
            for k, value in enumerate(bracket.components):
                rational = value.as_rational()
                if rational is None:
                    raise EngineError(f"{group_id}: [X{i + 1}, X{j + 1}] is not left-invariant")
                if rational:
                    constants[(i, j, k)] = rational
    return GroupSpec(group_id, frame, coframe, constants, law, inverse_, description)


_GROUPS: Dict[str, GroupSpec] = {gid: _build_group(gid) for gid in _GROUP_FRAMES}


def group(group_id: str) -> GroupSpec:
    if group_id not in _GROUPS:
        raise UnknownGroup(group_id)
    return _GROUPS[group_id]


def groups(include_reference: bool = False) -> List[str]:
    return [g for g in _GROUPS if include_reference or g in PRINTED_GROUPS]


# -- families --------------------------------------------------------------

def _fr(**values: int) -> Dict[str, Fraction]:
    return {k: Fraction(v) for k, v in values.items()}


_POSITIVE_LAMBDA = (Constraint("lambda", ">0"),)
_SPACELIKE_AB = (Constraint("a", ">0"), Constraint("a*c - b^2", ">0"))

_FAMILIES: Dict[str, MetricFamily] = {f.id: f for f in [
    MetricFamily("g_mu", "H3xR", "g_μ", ("mu",),
                 {(0, 0): "1", (1, 1): "-1", (2, 2): "mu", (3, 3): "1"},
                 (Constraint("mu", ">0"),), _fr(mu=2)),
    MetricFamily("g_lambda_plus", "H3xR", "g_λ⁺", ("lambda",),
                 {(0, 0): "1", (1, 1): "1", (2, 2): "lambda", (3, 3): "-1"},
                 _POSITIVE_LAMBDA, _fr(**{"lambda": 2})),
    MetricFamily("g_lambda_minus", "H3xR", "g_λ⁻", ("lambda",),
                 {(0, 0): "1", (1, 1): "1", (2, 2): "-lambda", (3, 3): "1"},
                 _POSITIVE_LAMBDA, _fr(**{"lambda": 2})),
    MetricFamily("g0_1", "H3xR", "g₀¹", (), {(0, 0): "1", (1, 1): "1", (2, 3): "1"}),
    MetricFamily("g0_2", "H3xR", "g₀²", (), {(0, 0): "1", (1, 2): "1", (3, 3): "1"}),
    MetricFamily("g0_3", "H3xR", "g₀³", (), {(0, 0): "1", (1, 3): "1", (2, 2): "1"}),
    MetricFamily("gA_plus", "G4", "g_A⁺", ("a", "b", "c"),
                 {(0, 0): "1", (1, 1): "-1", (2, 2): "a", (2, 3): "b", (3, 3): "c"},
                 _SPACELIKE_AB, _fr(a=2, b=1, c=1)),
    MetricFamily("gA_minus", "G4", "g_A⁻", ("a", "b", "c"),
                 {(0, 0): "-1", (1, 1): "1", (2, 2): "a", (2, 3): "b", (3, 3): "c"},
                 _SPACELIKE_AB, _fr(a=2, b=1, c=1)),
    MetricFamily("gA", "G4", "g_A", ("a", "b", "c"),
                 {(0, 0): "1", (1, 1): "1", (2, 2): "a", (2, 3): "b", (3, 3): "c"},
                 (Constraint("a*c - b^2", "<0"),), _fr(a=1, b=2, c=1)),
    MetricFamily("g1_lambda", "G4", "g₁^λ", ("lambda",),
                 {(0, 0): "1", (1, 3): "1", (2, 2): "lambda"},
                 _POSITIVE_LAMBDA, _fr(**{"lambda": 3})),
    MetricFamily("g2_lambda", "G4", "g₂^λ", ("lambda",),
                 {(1, 1): "1", (0, 3): "1", (2, 2): "lambda"},
                 _POSITIVE_LAMBDA, _fr(**{"lambda": 3})),
    MetricFamily("g3_lambda", "G4", "g₃^λ", ("lambda",),
                 {(1, 1): "1", (0, 2): "1", (3, 3): "lambda"},
                 _POSITIVE_LAMBDA, _fr(**{"lambda": 3})),
    MetricFamily("g4_lambda", "G4", "g₄^λ", ("lambda",),
                 {(0, 0): "1", (1, 2): "1", (3, 3): "lambda"},
                 _POSITIVE_LAMBDA, _fr(**{"lambda": 3})),
    MetricFamily("general_diag", "H3xR", "ω₁² + a1 ω₂² + a2 ω₃² + a3 ω₄²", ("a1", "a2", "a3"),
                 {(0, 0): "1", (1, 1): "a1", (2, 2): "a2", (3, 3): "a3"},
                 (), _fr(a1=1, a2=2, a3=-1), negatives=None, reference=True),
    MetricFamily("diagonal_flow", "H3xR", "f1 ω₁² + f2 ω₂² + f3 ω₃² + f4 ω₄²",
                 ("f1", "f2", "f3", "f4"),
                 {(0, 0): "f1", (1, 1): "f2", (2, 2): "f3", (3, 3): "f4"},
                 (), _fr(f1=1, f2=1, f3=1, f4=-1), negatives=None, reference=True),
    MetricFamily("euclidean", "R4", "dx² + dy² + dz² + dw²", (),
                 {(0, 0): "1", (1, 1): "1", (2, 2): "1", (3, 3): "1"},
                 negatives=0, reference=True),
    MetricFamily("minkowski", "R4", "dx² + dy² + dz² − dw²", (),
                 {(0, 0): "1", (1, 1): "1", (2, 2): "1", (3, 3): "-1"},
                 reference=True),
]}

THEOREM_FAMILIES: Dict[int, Tuple[str, ...]] = {
    2: ("g_lambda_plus", "g_lambda_minus", "g_mu"),
    3: ("g0_1",),
    4: ("g0_2",),
    5: ("g0_3",),
    7: ("g1_lambda",),
    8: ("g2_lambda",),
}

# Catalog-level disagreements with the printed source, reported by `report`.
CATALOG_NOTES: List[Dict[str, str]] = [
    {
        "source": "group law H3xR",
        "entry": "(x, y, z, w)·(x', y', z', w')",
        "printed": "(x+x', y+y'+xz', z+z', w+w')",
        "computed": "(x+x', y+y', z+z'+xy', w+w')",
        "note": "the printed law does not leave X2 = ∂y + x∂z invariant; the registered law does",
    },
    {
        "source": "group law G4",
        "entry": "(x, y, z, w)·(x', y', z', w')",
        "printed": "not given",
        "computed": "(x+x', y+y', z+z'+xy', w+w'+xz'+x²y'/2)",
        "note": "derived so that the frame X1..X4 is left-invariant",
    },
]


def family(family_id: str) -> MetricFamily:
    if family_id not in _FAMILIES:
        raise UnknownFamily(family_id)
    return _FAMILIES[family_id]


def families(group_id: Optional[str] = None, include_reference: bool = False) -> List[MetricFamily]:
    """Families in catalog order, optionally restricted to one group"""
    return [f for f in _FAMILIES.values()
            if (include_reference or not f.reference) and (group_id is None or f.group == group_id)]


def inertia(matrix: Sequence[Sequence[Fraction]]) -> Tuple[int, int, int]:
    """(positive, negative, null) counts by symmetric Gaussian elimination over Q"""
    m = [[Fraction(v) for v in row] for row in matrix]
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        pivot = next((i for i in active if m[i][i]), None)
        if pivot is None:
            pair = next(((i, j) for i in active for j in active if i != j and m[i][j]), None)
            if pair is None:
                break
            i, j = pair
            # congruence: row/col i += row/col j makes the diagonal 2*m[i][j] + m[j][j]
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            pivot = i
        p = m[pivot][pivot]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        for r in active:
            factor = m[r][pivot] / p
            if factor:
                for k in range(n):
                    m[r][k] -= factor * m[pivot][k]
                for k in range(n):
                    m[k][r] -= factor * m[k][pivot]
    return pos, neg, n - pos - neg


def check_binding(fam: MetricFamily, binding: Mapping[str, Fraction]):
    for name in binding:
        if name not in fam.params:
            raise ConstraintViolation(fam.id, f"parameter {name!r} is not used by this family")
    for constraint in fam.constraints:
        if constraint.holds(binding) is False:
            raise ConstraintViolation(fam.id, str(constraint))


def _binding_value(value) -> Union[Fraction, Scalar]:
    if isinstance(value, str):
        value = parse_scalar(value)
    if isinstance(value, Scalar):
        rational = value.as_rational()
        if rational is None:
            if value.has_coordinates():
                raise ConstraintViolation("binding", f"value {value} depends on the coordinates")
            return value
        return rational
    return Fraction(value)


def metric(family_id: str, binding: Optional[Mapping[str, object]] = None) -> MetricInstance:
    """Instantiate a family with a (partial) binding of its parameters.

    Values are rationals, or Scalars in the parameters (e.g. a2 -> lambda). All-rational
    bindings are cached.
    """
    clean = {name: _binding_value(value) for name, value in (binding or {}).items()}
    if all(isinstance(v, Fraction) for v in clean.values()):
        return _metric(family_id, tuple(sorted(clean.items())))
    return _build_metric(family_id, clean)


@lru_cache(maxsize=None)
def _metric(family_id: str, binding_items: Tuple[Tuple[str, Fraction], ...]) -> MetricInstance:
    return _build_metric(family_id, dict(binding_items))


def _build_metric(family_id: str, binding: Dict[str, Union[Fraction, Scalar]]) -> MetricInstance:
    fam = family(family_id)
    check_binding(fam, {k: v for k, v in binding.items() if isinstance(v, Fraction)})
    for name in binding:
        if name not in fam.params:
            raise ConstraintViolation(fam.id, f"parameter {name!r} is not used by this family")
    frame_matrix = [[value.subs(binding) if binding else value for value in row]
                    for row in fam.frame_matrix()]
    frame_g = SymTensor2(frame_matrix, Basis.frame(fam.group))
    rationals = [[value.as_rational() for value in row] for row in frame_matrix]
    if fam.negatives is not None and all(v is not None for row in rationals for v in row):
        # frame components are constant, so the identity-point signature is global
        counts = inertia(rationals)
        if counts[2] or counts[1] != fam.negatives:
            raise SignatureNotLorentz(fam.id, counts)
    g = change_basis(frame_g, COORDINATE)
    return MetricInstance(fam.id, binding, g, fam.group, frame_g)


def coordinate_point() -> List[Scalar]:
    return [sym(c) for c in COORDS]


def left_translation_pushforward(group_id: str, a: Sequence[object], X: VectorField,
                                 law: Optional[GroupLaw] = None,
                                 law_inverse: Optional[Callable[[Point], List[Scalar]]] = None) -> VectorField:
    """Push X forward by left multiplication with the point a, expressed in X's basis"""
    spec = group(group_id)
    law = law or spec.group_law
    law_inverse = law_inverse or spec.group_inverse
    if law is None or law_inverse is None:
        raise NoGroupLaw(group_id)
    point = [const(Fraction(v)) if not isinstance(v, Scalar) else v for v in a]
    p = coordinate_point()
    image = law(point, p)
    jacobian = [[image[k].partial(c) for c in COORDS] for k in range(4)]
    preimage = law(law_inverse(point), p)
    back = dict(zip(COORDS, preimage))
    v = change_basis(X, COORDINATE).components
    out = []
    for k in range(4):
        total = ZERO
        for j in range(4):
            if jacobian[k][j] and v[j]:
                total = total + jacobian[k][j] * v[j]
        out.append(total.subs(back))
    return change_basis(VectorField(out), X.basis)


def law_fixes_frame(group_id: str, a: Sequence[object], law: Optional[GroupLaw] = None,
                    law_inverse=None) -> List[int]:
    """0-based indices of frame fields not fixed by left translation with a"""
    spec = group(group_id)
    moved = []
    for i, X in enumerate(spec.frame):
        if left_translation_pushforward(group_id, a, X, law, law_inverse) != X:
            moved.append(i)
    return moved


class _Quadratic:
    """Truncated symmetric algebra on dx, dy, dz, dw (degrees 0 to 2), used to read
    metrics written as polynomials in the coordinate differentials."""

    __slots__ = ("scalar", "linear", "quadratic")

    def __init__(self, scalar=ZERO, linear=None, quadratic=None):
        self.scalar = scalar
        self.linear = linear or [ZERO] * 4
        self.quadratic = quadratic or zeros()

    @classmethod
    def differential(cls, index: int) -> "_Quadratic":
        return cls(ZERO, [ONE if i == index else ZERO for i in range(4)])

    @staticmethod
    def lift(value) -> "_Quadratic":
        return value if isinstance(value, _Quadratic) else _Quadratic(Scalar.coerce(value))

    def top_degree(self) -> int:
        if any(a for row in self.quadratic for a in row):
            return 2
        return 1 if any(self.linear) else 0

    def __add__(self, other):
        other = _Quadratic.lift(other)
        return _Quadratic(self.scalar + other.scalar,
                          [a + b for a, b in zip(self.linear, other.linear)],
                          [[a + b for a, b in zip(r, s)] for r, s in zip(self.quadratic, other.quadratic)])

    __radd__ = __add__

    def __neg__(self):
        return _Quadratic(-self.scalar, [-a for a in self.linear],
                          [[-a for a in r] for r in self.quadratic])

    def __sub__(self, other):
        return self + (-_Quadratic.lift(other))

    def __rsub__(self, other):
        return _Quadratic.lift(other) + (-self)

    def __mul__(self, other):
        other = _Quadratic.lift(other)
        if self.top_degree() + other.top_degree() > 2:
            raise ValueError("metric expression exceeds degree 2 in the differentials")
        s1, s2 = self.scalar, other.scalar
        linear = [s1 * b + s2 * a for a, b in zip(self.linear, other.linear)]
        quadratic = zeros()
        for i in range(4):
            for j in range(4):
                cross = (self.linear[i] * other.linear[j] + self.linear[j] * other.linear[i]) / 2
                quadratic[i][j] = s1 * other.quadratic[i][j] + s2 * self.quadratic[i][j] + cross
        return _Quadratic(s1 * s2, linear, quadratic)

    __rmul__ = __mul__

    def __truediv__(self, other):
        factor = ONE / Scalar.coerce(other)
        return self * factor


def parse_coordinate_metric(text: str) -> SymTensor2:
    """Read 'dx^2 + 2*dz*dw + ...' into coordinate components"""
    names = {f"d{c}": _Quadratic.differential(i) for i, c in enumerate(COORDS)}
    value = _Quadratic.lift(parse_scalar(text, names=names))
    if value.scalar or any(value.linear):
        raise ValueError(f"not a quadratic form in the differentials: {text!r}")
    return SymTensor2(value.quadratic, COORDINATE)
