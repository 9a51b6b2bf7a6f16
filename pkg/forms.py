"""Differential forms, vector fields and symmetric 2-tensors on the (x, y, z, w) patch.

Every object carries a basis tag: the coordinate basis, or the left-invariant frame of
a registered group. Coordinates are canonical; frame components are a view obtained
through the frame matrix E (row i = coordinate components of X_i) and the coframe
matrix (E^T)^-1 (row i = coordinate components of omega^i).
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from ring import COORDS, ONE, ZERO, EngineError, Scalar

Matrix = List[List[Any]]
Index = Tuple[int, ...]


class BasisMismatch(EngineError):
    def __init__(self, left: "Basis", right: "Basis"):
        super().__init__(f"basis mismatch: {left} vs {right}")
        self.left = left
        self.right = right


class DegreeOverflow(EngineError):
    def __init__(self, degree: int):
        super().__init__(f"form degree {degree} exceeds 4")
        self.degree = degree


class UnknownGroup(EngineError):
    def __init__(self, group: str):
        super().__init__(f"unknown group: {group!r}")
        self.group = group


@dataclass(frozen=True)
class Basis:
    kind: str = "coordinate"
    group: Optional[str] = None

    @classmethod
    def frame(cls, group: str) -> "Basis":
        return cls("frame", group)

    @property
    def is_frame(self) -> bool:
        return self.kind == "frame"

    def __str__(self) -> str:
        return f"frame({self.group})" if self.is_frame else "coordinate"


COORDINATE = Basis()


# -- matrices of ring elements ---------------------------------------------

def zeros(n: int = 4) -> Matrix:
    return [[ZERO] * n for _ in range(n)]


def identity(n: int = 4) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> Matrix:
    return [list(row) for row in zip(*m)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            total = ZERO
            for t in range(k):
                if a[i][t] and b[t][j]:
                    total = total + a[i][t] * b[t][j]
            row.append(total)
        out.append(row)
    return out


def determinant(m: Matrix) -> Scalar:
    """Laplace expansion along the first row, skipping zero entries"""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = ZERO
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def inverse(m: Matrix) -> Matrix:
    """Exact inverse by adjugate over determinant; the determinant must be coordinate-free"""
    n = len(m)
    det = determinant(m)
    out = zeros(n)
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
            cofactor = determinant(minor) if n > 1 else ONE
            if (i + j) % 2:
                cofactor = -cofactor
            out[j][i] = cofactor / det
    return out


def matrices_equal(a: Matrix, b: Matrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


# -- frame registry --------------------------------------------------------

@dataclass
class FrameData:
    group: str
    frame: Matrix
    coframe: Matrix
    _wedges: Dict[Tuple[str, Index], "KForm"] = field(default_factory=dict)


_FRAMES: Dict[str, FrameData] = {}


def register_frame(group: str, frame: Matrix) -> FrameData:
    """Register a group's frame matrix; the coframe is computed by exact inversion"""
    coframe = inverse(transpose(frame))
    data = FrameData(group, [list(r) for r in frame], coframe)
    _FRAMES[group] = data
    return data


def frame_data(group: str) -> FrameData:
    if group not in _FRAMES:
        raise UnknownGroup(group)
    return _FRAMES[group]


def _sort_sign(indices: Sequence[int]) -> Tuple[int, Index]:
    """Sign of the sorting permutation, or 0 when an index repeats"""
    if len(set(indices)) != len(indices):
        return 0, ()
    inversions = sum(1 for i, j in combinations(range(len(indices)), 2) if indices[i] > indices[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


# -- exterior forms --------------------------------------------------------

class KForm:
    """Exterior k-form; indices are 0-based strictly increasing tuples"""

    __slots__ = ("degree", "basis", "components")

    def __init__(self, degree: int, components: Optional[Mapping[Index, Any]] = None,
                 basis: Basis = COORDINATE):
        if degree > 4:
            raise DegreeOverflow(degree)
        self.degree = degree
        self.basis = basis
        self.components: Dict[Index, Any] = {}
        for key, value in (components or {}).items():
            if value:
                self.components[tuple(key)] = value

    @classmethod
    def one_form(cls, coefficients: Sequence[Any], basis: Basis = COORDINATE) -> "KForm":
        return cls(1, {(i,): c for i, c in enumerate(coefficients)}, basis)

    @classmethod
    def function(cls, value: Any, basis: Basis = COORDINATE) -> "KForm":
        return cls(0, {(): value}, basis)

    @classmethod
    def basic(cls, indices: Sequence[int], basis: Basis = COORDINATE) -> "KForm":
        """The wedge of basis 1-forms with the given 0-based indices"""
        sign, key = _sort_sign(indices)
        return cls(len(indices), {key: Scalar.const(sign)} if sign else {}, basis)

    def component(self, indices: Sequence[int]) -> Any:
        return self.components.get(tuple(indices), ZERO)

    def is_zero(self) -> bool:
        return not self.components

    def _check(self, other: "KForm"):
        if self.basis != other.basis:
            raise BasisMismatch(self.basis, other.basis)

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        if self.degree != other.degree and self.components and other.components:
            raise ValueError("cannot add forms of different degree")
        merged = dict(self.components)
        for key, value in other.components.items():
            merged[key] = merged[key] + value if key in merged else value
        degree = self.degree if self.components else other.degree
        return KForm(degree, merged, self.basis)

    def __neg__(self) -> "KForm":
        return KForm(self.degree, {k: -v for k, v in self.components.items()}, self.basis)

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def scale(self, factor: Any) -> "KForm":
        return KForm(self.degree, {k: factor * v for k, v in self.components.items()}, self.basis)

    def __mul__(self, factor):
        if isinstance(factor, KForm):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def __truediv__(self, factor):
        return self.scale(ONE / factor)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        if self.basis != other.basis:
            return False
        if self.degree != other.degree:
            return self.is_zero() and other.is_zero()
        return (self - other).is_zero()

    __hash__ = None

    def wedge(self, other: "KForm") -> "KForm":
        self._check(other)
        degree = self.degree + other.degree
        if degree > 4:
            raise DegreeOverflow(degree)
        out: Dict[Index, Any] = {}
        for left, a in self.components.items():
            for right, b in other.components.items():
                sign, key = _sort_sign(left + right)
                if not sign:
                    continue
                term = a * b if sign > 0 else -(a * b)
                out[key] = out[key] + term if key in out else term
        return KForm(degree, out, self.basis)

    def __xor__(self, other: "KForm") -> "KForm":
        return self.wedge(other)

    def exterior_derivative(self) -> "KForm":
        if self.basis.is_frame:
            return change_basis(change_basis(self, COORDINATE).exterior_derivative(), self.basis)
        if self.degree == 4:
            return KForm(4, {}, self.basis)
        out: Dict[Index, Any] = {}
        for key, value in self.components.items():
            for a, coordinate in enumerate(COORDS):
                if a in key:
                    continue
                derivative = value.partial(coordinate)
                if not derivative:
                    continue
                sign, merged = _sort_sign((a,) + key)
                term = derivative if sign > 0 else -derivative
                out[merged] = out[merged] + term if merged in out else term
        return KForm(self.degree + 1, out, self.basis)

    def render(self) -> str:
        if not self.components:
            return "0"
        names = "ω" if self.basis.is_frame else None
        pieces = []
        for key in sorted(self.components):
            if names:
                basis_text = "∧".join(f"ω{i + 1}" for i in key)
            else:
                basis_text = "∧".join(f"d{COORDS[i]}" for i in key)
            value = self.components[key].render()
            pieces.append(f"({value})" + (f"*{basis_text}" if basis_text else ""))
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"KForm[{self.degree}, {self.basis}]({self.render()})"


def wedge(a: KForm, b: KForm) -> KForm:
    return a.wedge(b)


def exterior_derivative(a: KForm) -> KForm:
    return a.exterior_derivative()


# -- vector fields ---------------------------------------------------------

class VectorField:
    __slots__ = ("basis", "components")

    def __init__(self, components: Sequence[Any], basis: Basis = COORDINATE):
        if len(components) != 4:
            raise ValueError("a vector field has exactly four components")
        self.basis = basis
        self.components = list(components)

    @classmethod
    def basis_field(cls, index: int, basis: Basis = COORDINATE) -> "VectorField":
        return cls([ONE if i == index else ZERO for i in range(4)], basis)

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.basis != other.basis:
            raise BasisMismatch(self.basis, other.basis)
        return VectorField([a + b for a, b in zip(self.components, other.components)], self.basis)

    def __neg__(self) -> "VectorField":
        return VectorField([-a for a in self.components], self.basis)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def scale(self, factor: Any) -> "VectorField":
        return VectorField([factor * a for a in self.components], self.basis)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        if self.basis != other.basis:
            other = change_basis(other, self.basis)
        return all(a == b for a, b in zip(self.components, other.components))

    __hash__ = None

    def apply(self, f: Any) -> Any:
        """Directional derivative X(f) in coordinates"""
        coords = change_basis(self, COORDINATE).components
        total = ZERO
        for value, coordinate in zip(coords, COORDS):
            if value:
                total = total + value * f.partial(coordinate)
        return total

    def render(self) -> str:
        names = [f"X{i + 1}" for i in range(4)] if self.basis.is_frame else [f"∂{c}" for c in COORDS]
        pieces = [f"({c.render()})*{n}" for c, n in zip(self.components, names) if c]
        return " + ".join(pieces) if pieces else "0"

    def __repr__(self) -> str:
        return f"VectorField[{self.basis}]({self.render()})"


def pairing(omega: KForm, X: VectorField) -> Any:
    """<omega, X> for a 1-form, computed in coordinates"""
    form = change_basis(omega, COORDINATE)
    field_ = change_basis(X, COORDINATE)
    total = ZERO
    for (index,), value in form.components.items():
        if field_.components[index]:
            total = total + value * field_.components[index]
    return total


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^k = X(Y^k) - Y(X^k), returned in the basis of X"""
    target = X.basis
    x = change_basis(X, COORDINATE).components
    y = change_basis(Y, COORDINATE).components
    out = []
    for k in range(4):
        total = ZERO
        for i, coordinate in enumerate(COORDS):
            if x[i]:
                total = total + x[i] * y[k].partial(coordinate)
            if y[i]:
                total = total - y[i] * x[k].partial(coordinate)
        out.append(total)
    return change_basis(VectorField(out), target)


# -- symmetric 2-tensors ---------------------------------------------------

class SymTensor2:
    __slots__ = ("basis", "components")

    def __init__(self, components: Sequence[Sequence[Any]], basis: Basis = COORDINATE):
        self.basis = basis
        self.components = [list(row) for row in components]

    @classmethod
    def from_upper(cls, entries: Mapping[Tuple[int, int], Any], basis: Basis = COORDINATE) -> "SymTensor2":
        m = zeros()
        for (i, j), value in entries.items():
            m[i][j] = value
            m[j][i] = value
        return cls(m, basis)

    def is_symmetric(self) -> bool:
        return all(self.components[i][j] == self.components[j][i]
                   for i in range(4) for j in range(i + 1, 4))

    def entry(self, i: int, j: int) -> Any:
        return self.components[i][j]

    def upper(self) -> List[Tuple[int, int, Any]]:
        return [(i, j, self.components[i][j]) for i in range(4) for j in range(i, 4)]

    def __add__(self, other: "SymTensor2") -> "SymTensor2":
        if self.basis != other.basis:
            raise BasisMismatch(self.basis, other.basis)
        return SymTensor2([[a + b for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.components, other.components)], self.basis)

    def __neg__(self) -> "SymTensor2":
        return SymTensor2([[-a for a in row] for row in self.components], self.basis)

    def __sub__(self, other: "SymTensor2") -> "SymTensor2":
        return self + (-other)

    def scale(self, factor: Any) -> "SymTensor2":
        return SymTensor2([[factor * a for a in row] for row in self.components], self.basis)

    def is_zero(self) -> bool:
        return not any(a for row in self.components for a in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymTensor2):
            return NotImplemented
        if self.basis != other.basis:
            other = change_basis(other, self.basis)
        return matrices_equal(self.components, other.components)

    __hash__ = None

    def __repr__(self) -> str:
        rows = "; ".join(", ".join(a.render() for a in row) for row in self.components)
        return f"SymTensor2[{self.basis}]({rows})"


# -- basis changes ---------------------------------------------------------

def _one_form_image(data: FrameData, index: int, to_frame: bool) -> KForm:
    if to_frame:
        # dx^a = sum_i E[i][a] omega^i
        return KForm.one_form([data.frame[i][index] for i in range(4)], Basis.frame(data.group))
    return KForm.one_form(data.coframe[index], COORDINATE)


def _basic_image(data: FrameData, key: Index, to_frame: bool) -> KForm:
    cache_key = ("frame" if to_frame else "coordinate", key)
    if cache_key not in data._wedges:
        target = Basis.frame(data.group) if to_frame else COORDINATE
        image = KForm.function(ONE, target)
        for index in key:
            image = image.wedge(_one_form_image(data, index, to_frame))
        data._wedges[cache_key] = image
    return data._wedges[cache_key]


def _form_to(form: KForm, data: FrameData, to_frame: bool) -> KForm:
    target = Basis.frame(data.group) if to_frame else COORDINATE
    if form.degree == 0:
        return KForm(0, form.components, target)
    out = KForm(form.degree, {}, target)
    for key, value in form.components.items():
        out = out + _basic_image(data, key, to_frame).scale(value)
    return KForm(form.degree, out.components, target)


def change_basis(t, to: Basis):
    """Exact conversion of a KForm, VectorField or SymTensor2 to another basis"""
    if t.basis == to:
        return t
    if t.basis.is_frame and to.is_frame:
        return change_basis(change_basis(t, COORDINATE), to)
    data = frame_data(to.group if to.is_frame else t.basis.group)
    to_frame = to.is_frame
    if isinstance(t, KForm):
        return _form_to(t, data, to_frame)
    if isinstance(t, VectorField):
        if to_frame:
            # P^i = sum_a Theta[i][a] V^a
            comps = [_dot(data.coframe[i], t.components) for i in range(4)]
        else:
            # V^a = sum_i P^i E[i][a]
            comps = [_dot([data.frame[i][a] for i in range(4)], t.components) for a in range(4)]
        return VectorField(comps, to)
    if isinstance(t, SymTensor2):
        m = data.frame if to_frame else data.coframe
        # frame: G = E g E^T ; coordinate: g = Theta^T G Theta
        if to_frame:
            comps = _congruence(m, t.components)
        else:
            comps = _congruence(transpose(m), t.components)
        return SymTensor2(comps, to)
    raise TypeError(f"cannot change basis of {type(t).__name__}")


def _dot(row: Sequence[Any], values: Sequence[Any]) -> Any:
    total = ZERO
    for a, b in zip(row, values):
        if a and b:
            total = total + a * b
    return total


def _congruence(m: Matrix, g: Sequence[Sequence[Any]]) -> Matrix:
    """m g m^T computed entrywise, filling the upper triangle and mirroring"""
    out = zeros()
    for i in range(4):
        for j in range(i, 4):
            total = ZERO
            for a in range(4):
                if not m[i][a]:
                    continue
                inner = ZERO
                for b in range(4):
                    if m[j][b] and g[a][b]:
                        inner = inner + g[a][b] * m[j][b]
                if inner:
                    total = total + m[i][a] * inner
            out[i][j] = total
            out[j][i] = total
    return out


# -- Lie derivative of a metric -------------------------------------------

def lie_derivative_metric(X: VectorField, g: SymTensor2) -> SymTensor2:
    """(L_X g)_ab = X^k d_k g_ab + g_kb d_a X^k + g_ak d_b X^k, in coordinates"""
    v = change_basis(X, COORDINATE).components
    gc = change_basis(g, COORDINATE).components
    dv = [[v[k].partial(c) if v[k] else ZERO for c in COORDS] for k in range(4)]
    out = zeros()
    for a in range(4):
        for b in range(a, 4):
            total = ZERO
            for k, coordinate in enumerate(COORDS):
                if v[k] and gc[a][b]:
                    derivative = gc[a][b].partial(coordinate)
                    if derivative:
                        total = total + v[k] * derivative
                if gc[k][b] and dv[k][a]:
                    total = total + gc[k][b] * dv[k][a]
                if gc[a][k] and dv[k][b]:
                    total = total + gc[a][k] * dv[k][b]
            out[a][b] = total
            out[b][a] = total
    return SymTensor2(out)


DERIVATIVES = ("",) + COORDS


class LinearDiffExpr:
    """Linear combination of placeholder functions P1..P4 and their first partials.

    Keys are (i, d) with i the 0-based component and d one of "", x, y, z, w.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Tuple[int, str], Scalar]] = None):
        self.terms: Dict[Tuple[int, str], Scalar] = {}
        for key, value in (terms or {}).items():
            if value:
                self.terms[key] = value

    @classmethod
    def placeholder(cls, index: int, derivative: str = "") -> "LinearDiffExpr":
        return cls({(index, derivative): ONE})

    def __add__(self, other):
        if not isinstance(other, LinearDiffExpr):
            if isinstance(other, Scalar) and not other:
                return self
            return NotImplemented
        merged = dict(self.terms)
        for key, value in other.terms.items():
            merged[key] = merged[key] + value if key in merged else value
        return LinearDiffExpr(merged)

    __radd__ = __add__

    def __neg__(self) -> "LinearDiffExpr":
        return LinearDiffExpr({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LinearDiffExpr):
            return NotImplemented
        return self + (-other)

    def __mul__(self, factor):
        if isinstance(factor, LinearDiffExpr):
            return NotImplemented
        factor = Scalar.coerce(factor)
        return LinearDiffExpr({k: factor * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, factor):
        return self * (Scalar.const(1) / Scalar.coerce(factor))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearDiffExpr):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(k, ZERO) == other.terms.get(k, ZERO) for k in keys)

    __hash__ = None

    def apply(self, components: Sequence[Any]) -> Any:
        """Substitute concrete component functions for the placeholders"""
        total = ZERO
        for (index, derivative), coeff in self.terms.items():
            value = components[index]
            if derivative:
                value = value.partial(derivative)
            if value:
                total = total + coeff * value
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for (index, derivative) in sorted(self.terms, key=lambda k: (k[0], DERIVATIVES.index(k[1]))):
            name = f"P{index + 1}" + (f"_{derivative}" if derivative else "")
            coeff = self.terms[(index, derivative)]
            if coeff == 1:
                pieces.append(name)
            elif coeff == -1:
                pieces.append(f"-{name}")
            else:
                pieces.append(f"({coeff.render()})*{name}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"LinearDiffExpr({self.render()})"


PLACEHOLDER_NAMES: Dict[str, LinearDiffExpr] = {
    f"P{i + 1}" + (f"_{d}" if d else ""): LinearDiffExpr.placeholder(i, d)
    for i in range(4) for d in DERIVATIVES
}


def lie_derivative_template(g: SymTensor2, reading: str = "frame") -> List[List[LinearDiffExpr]]:
    """(L_X g)_ab in coordinates as a linear differential expression in P1..P4.

    reading "frame" takes X = sum P^i X_i in g's frame; "coordinate" takes X = sum P^i d_i.
    """
    if reading not in ("frame", "coordinate"):
        raise ValueError(f"unknown reading: {reading!r}")
    gc = change_basis(g, COORDINATE).components
    if reading == "frame":
        if not g.basis.is_frame:
            raise BasisMismatch(g.basis, Basis.frame("?"))
        e = frame_data(g.basis.group).frame
    else:
        e = identity()
    # B[i][b] = sum_k g_kb E[i][k]
    pairing_ = [[_dot([gc[k][b] for k in range(4)], e[i]) for b in range(4)] for i in range(4)]
    out: List[List[LinearDiffExpr]] = [[LinearDiffExpr() for _ in range(4)] for _ in range(4)]
    for a in range(4):
        for b in range(a, 4):
            terms: Dict[Tuple[int, str], Scalar] = {}
            for i in range(4):
                value = ZERO
                for k, coordinate in enumerate(COORDS):
                    if e[i][k] and gc[a][b]:
                        value = value + e[i][k] * gc[a][b].partial(coordinate)
                    if gc[k][b] and e[i][k]:
                        value = value + gc[k][b] * e[i][k].partial(COORDS[a])
                    if gc[a][k] and e[i][k]:
                        value = value + gc[a][k] * e[i][k].partial(COORDS[b])
                terms[(i, "")] = value
                first = (i, COORDS[a])
                second = (i, COORDS[b])
                terms[first] = terms.get(first, ZERO) + pairing_[i][b]
                terms[second] = terms.get(second, ZERO) + pairing_[i][a]
            expr = LinearDiffExpr(terms)
            out[a][b] = expr
            out[b][a] = expr
    return out
