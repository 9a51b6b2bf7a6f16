"""Lorentz Ricci solitons: 2Ric[g] + L_X g + αg = 0.

Residuals of given (X, α), certificates for the catalogued theorems, the PDE systems in
placeholder form, and a solver that turns a bounded-degree polynomial ansatz for X into
an exact linear system.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from catalog import MetricInstance, family, metric
from config import Config
from curvature import coordinate_ricci
from forms import (COORDINATE, LinearDiffExpr, SymTensor2, VectorField, change_basis,
                   lie_derivative_metric, lie_derivative_template, zeros)
from logger import get_logger
from ring import COORDS, NSYMS, ONE, SYMBOL_INDEX, ZERO, EngineError, Poly, Scalar, parse_scalar, sym
from utils import load_fixtures, render_value

logger = get_logger()

TRIG_BASIS = ("1", "cos", "sin")
FREE_CONSTANTS = tuple(f"C{i}" for i in range(1, 11))
AFFINE_SYMBOLS = FREE_CONSTANTS + ("alpha",)


class AnsatzTooLarge(EngineError):
    def __init__(self, unknowns: int, cap: int):
        super().__init__(f"ansatz has {unknowns} unknowns, cap is {cap}")
        self.unknowns = unknowns
        self.cap = cap


class NoSolution(EngineError):
    def __init__(self, family_id: str, degree: int, trig: bool):
        super().__init__(
            f"{family_id}: no soliton field of degree <= {degree}" + (" with cos w, sin w" if trig else "")
        )
        self.family = family_id
        self.degree = degree
        self.trig = trig


class Classification(str, Enum):
    SHRINKING = "Shrinking"
    STEADY = "Steady"
    EXPANDING = "Expanding"
    PARAMETER_DEPENDENT = "ParameterDependent"


# -- functions of w --------------------------------------------------------

class ExtendedScalar:
    """Σ c_b·b(w) for b in {1, cos w, sin w}, with Scalar coefficients"""

    __slots__ = ("parts",)
    __hash__ = None

    def __init__(self, parts: Optional[Mapping[str, Scalar]] = None):
        self.parts: Dict[str, Scalar] = {}
        for basis, value in (parts or {}).items():
            if basis not in TRIG_BASIS:
                raise ValueError(f"unknown basis function: {basis!r}")
            if value:
                self.parts[basis] = Scalar.coerce(value)

    @staticmethod
    def lift(value) -> "ExtendedScalar":
        if isinstance(value, ExtendedScalar):
            return value
        return ExtendedScalar({"1": Scalar.coerce(value)})

    def part(self, basis: str) -> Scalar:
        return self.parts.get(basis, ZERO)

    @property
    def trig(self) -> bool:
        return bool(set(self.parts) - {"1"})

    def __bool__(self) -> bool:
        return bool(self.parts)

    def is_zero(self) -> bool:
        return not self.parts

    def has_coordinates(self) -> bool:
        return self.trig or self.part("1").has_coordinates()

    def free_symbols(self) -> set:
        names = set()
        for value in self.parts.values():
            names |= value.free_symbols()
        if self.trig:
            names.add("w")
        return names

    def __add__(self, other):
        try:
            other = ExtendedScalar.lift(other)
        except TypeError:
            return NotImplemented
        merged = dict(self.parts)
        for basis, value in other.parts.items():
            merged[basis] = merged[basis] + value if basis in merged else value
        return ExtendedScalar(merged)

    __radd__ = __add__

    def __neg__(self) -> "ExtendedScalar":
        return ExtendedScalar({b: -v for b, v in self.parts.items()})

    def __sub__(self, other):
        try:
            return self + (-ExtendedScalar.lift(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return ExtendedScalar.lift(other) + (-self)
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        try:
            other = ExtendedScalar.lift(other)
        except TypeError:
            return NotImplemented
        if other.trig and self.trig:
            raise ValueError("product of two functions of w leaves the span of 1, cos w, sin w")
        if self.trig:
            factor, base = other.part("1"), self
        else:
            factor, base = self.part("1"), other
        return ExtendedScalar({b: factor * v for b, v in base.parts.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (ONE / Scalar.coerce(other))

    def __eq__(self, other) -> bool:
        try:
            other = ExtendedScalar.lift(other)
        except TypeError:
            return NotImplemented
        return all(self.part(b) == other.part(b) for b in TRIG_BASIS)

    def partial(self, coordinate: str) -> "ExtendedScalar":
        out = {b: v.partial(coordinate) for b, v in self.parts.items()}
        if coordinate == "w":
            # d/dw (c cos w) = -c sin w, d/dw (s sin w) = s cos w
            out["sin"] = out.get("sin", ZERO) - self.part("cos")
            out["cos"] = out.get("cos", ZERO) + self.part("sin")
        return ExtendedScalar(out)

    def subs(self, binding: Mapping[str, Any]) -> "ExtendedScalar":
        return ExtendedScalar({b: v.subs(binding) for b, v in self.parts.items()})

    def collapse(self) -> Union[Scalar, "ExtendedScalar"]:
        return self if self.trig else self.part("1")

    def render(self) -> str:
        if not self.parts:
            return "0"
        pieces = []
        for basis in TRIG_BASIS:
            if basis not in self.parts:
                continue
            text = self.parts[basis].render()
            if basis == "1":
                pieces.append(text)
            else:
                pieces.append(f"({text})*{basis}(w)")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"ExtendedScalar({self.render()})"


def _trig_function(name: str):
    def build(argument):
        if not isinstance(argument, Scalar) or argument != sym("w"):
            raise ValueError(f"{name}() is only defined on the coordinate w")
        return ExtendedScalar({name: ONE})
    return build


TRIG_FUNCTIONS = {"cos": _trig_function("cos"), "sin": _trig_function("sin")}


def parse_extended(text: str):
    """Parse a component that may contain cos(w) and sin(w)"""
    return parse_scalar(text, functions=TRIG_FUNCTIONS)


def substitute(value, binding: Mapping[str, Any]):
    if not binding:
        return value
    return value.subs(binding)


# -- candidates and certificates --------------------------------------------

@dataclass
class SolitonCandidate:
    metric: MetricInstance
    X: VectorField
    alpha: Scalar
    source: str

    def describe(self) -> Dict[str, Any]:
        return {
            "source": self.source,
            "alpha": render_value(self.alpha),
            "X": [render_value(c) for c in self.X.components],
        }


@dataclass
class Resolution:
    """Solver runs that stand in for a printed field that fails to verify.

    The full run looks for any field up to the printed degree. The shaped run keeps only
    the terms the printed field uses; a substitute counts only if that run succeeds.
    """
    binding: Dict[str, Fraction]
    degree: int
    trig: bool
    alpha: Optional[Scalar] = None
    classification: Optional[Classification] = None
    dimension: Optional[int] = None
    contains_printed_field: Optional[bool] = None
    verified: bool = False
    shape_terms: int = 0
    shape_dimension: Optional[int] = None
    matches_shape: bool = False
    error: Optional[str] = None

    @property
    def substitute_found(self) -> bool:
        return self.verified and self.matches_shape


@dataclass
class SolitonCertificate:
    theorem: Optional[int]
    family: str
    candidate: SolitonCandidate
    residual: SymTensor2
    is_soliton: bool
    classification: Classification
    claimed: Optional[str] = None
    discrepancies: List[Dict[str, str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    coordinate_reading: Optional[bool] = None
    resolution: Optional[Resolution] = None
    failing_terms: List[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.is_soliton or bool(self.resolution and self.resolution.substitute_found)


def residual(g: MetricInstance, X: VectorField, alpha) -> SymTensor2:
    """2 Ric[g] + L_X g + α g in coordinates"""
    ric = coordinate_ricci(g)
    lie = lie_derivative_metric(X, g.g)
    alpha = Scalar.coerce(alpha) if not isinstance(alpha, ExtendedScalar) else alpha
    out = zeros()
    for a in range(4):
        for b in range(a, 4):
            value = ric.components[a][b] * 2 + lie.components[a][b]
            if g.g.components[a][b]:
                value = value + alpha * g.g.components[a][b]
            out[a][b] = out[b][a] = value
    return SymTensor2(out, COORDINATE)


def is_zero_tensor(t: SymTensor2) -> bool:
    return not any(v for row in t.components for v in row)


def nonzero_entries(t: SymTensor2) -> List[Tuple[int, int, Any]]:
    return [(a, b, v) for a, b, v in t.upper() if v]


# -- sign of α ---------------------------------------------------------------

def _definite_sign(poly: Poly, positive: Iterable[str]) -> Optional[int]:
    """Sign of a polynomial that is a positive combination of monomials in positive
    symbols (or the negative of one), else None"""
    allowed = {SYMBOL_INDEX[name] for name in positive}
    signs = set()
    for exps, coeff in poly.terms.items():
        if any(e and i not in allowed for i, e in enumerate(exps)):
            return None
        signs.add(1 if coeff > 0 else -1)
    return signs.pop() if len(signs) == 1 else None


def classify(alpha, binding: Optional[Mapping[str, Any]] = None,
             positive: Iterable[str] = ("lambda", "mu")) -> Classification:
    """Shrinking, steady or expanding by the sign of α under λ > 0, μ > 0"""
    value = Scalar.coerce(alpha)
    if binding:
        value = value.subs(binding)
    if value.is_zero():
        return Classification.STEADY
    positive = set(positive)
    sign = _definite_sign(value.num, positive)
    for factor, mult in value.den:
        if sign is None:
            break
        factor_sign = _definite_sign(factor, positive)
        sign = None if factor_sign is None else sign * factor_sign ** mult
    if sign is None:
        return Classification.PARAMETER_DEPENDENT
    return Classification.SHRINKING if sign < 0 else Classification.EXPANDING


# -- PDE systems -------------------------------------------------------------

@dataclass
class PdeEquation:
    i: int
    j: int
    ricci_term: Scalar
    metric_term: Scalar
    lie: LinearDiffExpr

    @property
    def constant(self) -> Scalar:
        return self.ricci_term + self.metric_term

    @property
    def nontrivial(self) -> bool:
        return bool(self.constant)

    def render(self, expand: bool = False) -> str:
        pieces = []
        if self.ricci_term:
            pieces.append(self.ricci_term.render())
        lie = f"({self.lie.render()})" if expand else f"(L_X g)_{self.i + 1}{self.j + 1}"
        pieces.append(lie)
        if self.metric_term:
            text = self.metric_term.render()
            pieces.append(text if len(self.metric_term.num.terms) == 1 or self.metric_term.den else f"({text})")
        return (" + ".join(pieces)).replace("+ -", "- ") + " = 0"


def pde_system(g: MetricInstance, alpha=None, reading: str = "frame") -> List[PdeEquation]:
    """Entries of 2Ric + L_X g + αg = 0 with X's components as placeholders P1..P4"""
    alpha = sym("alpha") if alpha is None else Scalar.coerce(alpha)
    ric = coordinate_ricci(g).components
    gc = g.g.components
    template = lie_derivative_template(g.frame_g if reading == "frame" else g.g, reading)
    return [PdeEquation(a, b, ric[a][b] * 2, alpha * gc[a][b], template[a][b])
            for a in range(4) for b in range(a, 4)]


# -- coefficient extraction --------------------------------------------------

Exps4 = Tuple[int, int, int, int]
Term = Tuple[int, str, Exps4]  # (frame component, basis function, coordinate monomial)
_PARAM_PAD = (0,) * (NSYMS - 4)


def _coordinate_split(value: Scalar) -> Dict[Exps4, Scalar]:
    groups: Dict[Exps4, Dict[tuple, Fraction]] = {}
    for exps, coeff in value.num.terms.items():
        groups.setdefault(exps[:4], {})[(0, 0, 0, 0) + exps[4:]] = coeff
    out = {}
    for key, terms in groups.items():
        poly = Poly._raw(terms)
        out[key] = Scalar(poly, dict(value.den)) if value.den else Scalar._raw(poly, ())
    return out


def coefficients(value) -> Dict[Tuple[str, Exps4], Scalar]:
    """Coefficient of each (basis function, coordinate monomial)"""
    out = {}
    for basis, part in ExtendedScalar.lift(value).parts.items():
        for exps, coeff in _coordinate_split(part).items():
            out[(basis, exps)] = coeff
    return out


def _affine_parts(value: Scalar) -> Optional[Dict[Optional[str], Scalar]]:
    """Split value = v0 + Σ v_s s over s in C1..C10, α; None if not affine in them"""
    indices = {SYMBOL_INDEX[name]: name for name in AFFINE_SYMBOLS}
    for factor, _ in value.den:
        if factor.symbols() & set(AFFINE_SYMBOLS):
            return None
    groups: Dict[Optional[str], Dict[tuple, Fraction]] = {}
    for exps, coeff in value.num.terms.items():
        hit = [(i, e) for i, e in enumerate(exps) if e and i in indices]
        if not hit:
            key = None
            rest = exps
        elif len(hit) == 1 and hit[0][1] == 1:
            key = indices[hit[0][0]]
            lowered = list(exps)
            lowered[hit[0][0]] = 0
            rest = tuple(lowered)
        else:
            return None
        groups.setdefault(key, {})[rest] = coeff
    return {key: Scalar(Poly._raw(terms), dict(value.den)) for key, terms in groups.items()}


# -- the ansatz --------------------------------------------------------------

def monomials(degree: int, include_w: bool = True) -> List[Exps4]:
    out = []
    for total in range(degree + 1):
        for a in range(total, -1, -1):
            for b in range(total - a, -1, -1):
                for c in range(total - a - b, -1, -1):
                    d = total - a - b - c
                    if d and not include_w:
                        continue
                    out.append((a, b, c, d))
    return out


@dataclass(frozen=True)
class Unknown:
    component: int
    basis: str
    exponents: Exps4

    @property
    def key(self) -> Term:
        return (self.component, self.basis, self.exponents)

    def function(self):
        mono = Scalar._raw(Poly._raw({self.exponents + _PARAM_PAD: Fraction(1)}), ())
        if self.basis == "1":
            return mono
        return ExtendedScalar({self.basis: mono})

    def render(self) -> str:
        mono = Scalar._raw(Poly._raw({self.exponents + _PARAM_PAD: Fraction(1)}), ()).render()
        if self.basis != "1":
            mono = f"{mono}*{self.basis}(w)" if mono != "1" else f"{self.basis}(w)"
        return f"P{self.component + 1}[{mono}]"


def ansatz_unknowns(degree: int, trig: bool, support: Optional[Iterable[Term]] = None) -> List[Unknown]:
    """Coefficient unknowns of X, optionally only those whose term lies in support"""
    out = []
    for i in range(4):
        for exps in monomials(degree):
            out.append(Unknown(i, "1", exps))
        if trig:
            for basis in ("cos", "sin"):
                for exps in monomials(degree, include_w=False):
                    out.append(Unknown(i, basis, exps))
    if support is not None:
        allowed = set(support)
        out = [u for u in out if u.key in allowed]
    return out


def field_support(X: VectorField) -> List[Term]:
    """Terms of X's components, whatever values its free constants take"""
    return sorted({(i, basis, exps) for i, component in enumerate(X.components) if component
                   for basis, exps in coefficients(component)})


RowKey = Tuple[int, int, int, Exps4]
RHS = -1


def _entry_coefficients(a: int, b: int, value, sink: Dict[RowKey, Any]):
    for (basis, exps), coeff in coefficients(value).items():
        sink[(a, b, TRIG_BASIS.index(basis), exps)] = coeff


@dataclass
class LinearSystem:
    unknowns: List[Unknown]
    alpha_column: Optional[int]
    row_keys: List[RowKey]
    rows: List[Dict[int, Any]]
    fraction_free: bool

    @property
    def columns(self) -> int:
        return len(self.unknowns) + (1 if self.alpha_column is not None else 0)


def _column_of(template, unknown: Unknown) -> Dict[RowKey, Any]:
    f = unknown.function()
    derivatives = {"": f}
    for coordinate in COORDS:
        derivatives[coordinate] = f.partial(coordinate)
    column: Dict[RowKey, Any] = {}
    for a in range(4):
        for b in range(a, 4):
            entry = ZERO
            for (i, d), coeff in template[a][b].terms.items():
                if i == unknown.component and derivatives[d]:
                    entry = entry + coeff * derivatives[d]
            if entry:
                _entry_coefficients(a, b, entry, column)
    return column


def assemble_system(g: MetricInstance, degree: int, trig: bool, alpha=None,
                    max_unknowns: Optional[int] = None, support: Optional[Iterable[Term]] = None) -> LinearSystem:
    """Coefficient equations of 2Ric + L_X g + αg = 0 for the ansatz; α=None means unknown"""
    unknowns = ansatz_unknowns(degree, trig, support)
    cap = Config.ANSATZ_MAX_UNKNOWNS if max_unknowns is None else max_unknowns
    count = len(unknowns) + (1 if alpha is None else 0)
    if count > cap:
        raise AnsatzTooLarge(count, cap)
    template = lie_derivative_template(g.frame_g, "frame")
    ric = coordinate_ricci(g).components
    gc = g.g.components
    columns = [_column_of(template, u) for u in unknowns]
    constant: Dict[RowKey, Any] = {}
    alpha_values: Dict[RowKey, Any] = {}
    for a in range(4):
        for b in range(a, 4):
            value = ric[a][b] * 2
            if alpha is not None and gc[a][b]:
                value = value + Scalar.coerce(alpha) * gc[a][b]
            if value:
                _entry_coefficients(a, b, value, constant)
            if alpha is None and gc[a][b]:
                _entry_coefficients(a, b, gc[a][b], alpha_values)
    alpha_column = None
    if alpha is None:
        alpha_column = len(unknowns)
        columns.append(alpha_values)

    by_row: Dict[RowKey, Dict[int, Any]] = {}
    for index, column in enumerate(columns):
        for key, value in column.items():
            by_row.setdefault(key, {})[index] = value
    for key, value in constant.items():
        by_row.setdefault(key, {})[RHS] = -value
    row_keys = sorted(by_row)
    rows = [by_row[key] for key in row_keys]

    rational = all(v.as_rational() is not None for row in rows for v in row.values())
    if rational:
        rows = [_integer_row({k: v.as_rational() for k, v in row.items()}) for row in rows]
    return LinearSystem(unknowns, alpha_column, row_keys, rows, rational)


# -- exact elimination ---------------------------------------------------------

def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    content = 0
    for v in row.values():
        content = gcd(content, v)
    if content > 1:
        return {k: v // content for k, v in row.items()}
    return row


def _integer_row(row: Dict[int, Fraction]) -> Dict[int, int]:
    lcm = 1
    for v in row.values():
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    return _primitive({k: int(v * lcm) for k, v in row.items() if v})


def _combine_integer(target: Dict[int, int], pivot: Dict[int, int], col: int) -> Dict[int, int]:
    """p*target - t*pivot, which clears col without division"""
    p, t = pivot[col], target[col]
    out = {k: p * v for k, v in target.items()}
    for k, v in pivot.items():
        value = out.get(k, 0) - t * v
        if value:
            out[k] = value
        else:
            out.pop(k, None)
    return _primitive(out)


def _combine_field(target: Dict[int, Scalar], pivot: Dict[int, Scalar], col: int) -> Dict[int, Scalar]:
    """target - t*pivot for a pivot row normalized to 1 at col"""
    t = target[col]
    out = dict(target)
    for k, v in pivot.items():
        value = out.get(k, ZERO) - t * v
        if value:
            out[k] = value
        else:
            out.pop(k, None)
    return out


def gauss_jordan(rows: Sequence[Dict[int, Any]], order: Sequence[int],
                 fraction_free: bool) -> Tuple[Dict[int, Dict[int, Any]], bool]:
    """Reduced echelon form. Returns pivot rows by column and whether the system is inconsistent"""
    pending = [row for row in rows if row]
    pivots: Dict[int, Dict[int, Any]] = {}
    combine = _combine_integer if fraction_free else _combine_field
    for col in order:
        candidates = [row for row in pending if col in row]
        if not candidates:
            continue
        chosen = min(candidates, key=len)
        pivot = chosen
        if not fraction_free:
            p = chosen[col]
            pivot = {k: v / p for k, v in chosen.items()}
        remaining = []
        for row in pending:
            if row is chosen:
                continue
            if col in row:
                row = combine(row, pivot, col)
            if row:
                remaining.append(row)
        pending = remaining
        for c, row in list(pivots.items()):
            if col in row:
                pivots[c] = combine(row, pivot, col)
        pivots[col] = pivot
    return pivots, bool(pending)


def dense_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Plain row reduction over Q"""
    m = [[Fraction(v) for v in row] for row in matrix]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                factor = m[r][c] / m[rank][c]
                m[r] = [x - factor * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def naive_killing_matrix(g: MetricInstance, degree: int, trig: bool = False) -> List[List[Fraction]]:
    """Matrix of X -> L_X g on the ansatz, built through the full coordinate Lie derivative"""
    unknowns = ansatz_unknowns(degree, trig)
    basis = g.frame_g.basis
    columns = []
    for u in unknowns:
        comps = [u.function() if i == u.component else ZERO for i in range(4)]
        lie = lie_derivative_metric(VectorField(comps, basis), g.g)
        column: Dict[RowKey, Any] = {}
        for a in range(4):
            for b in range(a, 4):
                if lie.components[a][b]:
                    _entry_coefficients(a, b, lie.components[a][b], column)
        columns.append(column)
    keys = sorted({key for column in columns for key in column})
    return [[Fraction(column[key].as_rational()) if key in column else Fraction(0) for column in columns]
            for key in keys]


# -- solution spaces -----------------------------------------------------------

def _as_scalar(value) -> Scalar:
    return value if isinstance(value, Scalar) else Scalar.const(value)


@dataclass
class SolutionSpace:
    metric: MetricInstance
    degree: int
    trig: bool
    fixed_alpha: Optional[Scalar]
    system: LinearSystem
    pivots: Dict[int, Dict[int, Any]]
    free_columns: List[int]
    particular: Dict[int, Any]
    directions: List[Dict[int, Any]]

    @property
    def unknowns(self) -> List[Unknown]:
        return self.system.unknowns

    @property
    def dimension(self) -> int:
        return len(self.free_columns)

    @property
    def equations(self) -> int:
        return len(self.system.rows)

    @property
    def alpha_free(self) -> bool:
        return self.system.alpha_column is not None and self.system.alpha_column in self.free_columns

    @property
    def alpha(self) -> Scalar:
        """Solved α: the fixed value, the forced value, or the symbol α when it is free"""
        if self.fixed_alpha is not None:
            return self.fixed_alpha
        column = self.system.alpha_column
        if column in self.free_columns:
            return sym("alpha")
        value = _as_scalar(self.particular.get(column, 0))
        for name, direction in zip(self._constant_names(), self.directions):
            if name and column in direction:
                value = value + _as_scalar(direction[column]) * sym(name)
        return value

    @property
    def alpha_forced(self) -> bool:
        return self.fixed_alpha is None and not self.alpha_free and not (
            self.alpha.free_symbols() & set(FREE_CONSTANTS))

    def _constant_names(self) -> List[Optional[str]]:
        """C1, C2, ... for free columns in order; None for the α column"""
        names: List[Optional[str]] = []
        k = 0
        for column in self.free_columns:
            if column == self.system.alpha_column:
                names.append("alpha")
            else:
                k += 1
                names.append(f"C{k}" if k <= len(FREE_CONSTANTS) else None)
        return names

    def field_of(self, vector: Mapping[int, Any]) -> VectorField:
        comps = [ZERO] * 4
        for column, value in vector.items():
            if column == RHS or column == self.system.alpha_column:
                continue
            u = self.unknowns[column]
            comps[u.component] = comps[u.component] + _as_scalar(value) * u.function()
        return VectorField([c.collapse() if isinstance(c, ExtendedScalar) else c for c in comps],
                           self.metric.frame_g.basis)

    def alpha_of(self, vector: Mapping[int, Any]) -> Scalar:
        if self.fixed_alpha is not None:
            return self.fixed_alpha
        return _as_scalar(vector.get(self.system.alpha_column, 0))

    def particular_candidate(self) -> SolitonCandidate:
        return SolitonCandidate(self.metric, self.field_of(self.particular),
                                self.alpha_of(self.particular), "solver")

    def general(self) -> Optional[SolitonCandidate]:
        """General member with free constants C1..Ck; None when k exceeds the symbol supply"""
        names = self._constant_names()
        if any(n is None for n in names):
            return None
        vector: Dict[int, Any] = {c: _as_scalar(v) for c, v in self.particular.items()}
        for name, direction in zip(names, self.directions):
            symbol = sym(name)
            for column, value in direction.items():
                vector[column] = vector.get(column, ZERO) + _as_scalar(value) * symbol
        return SolitonCandidate(self.metric, self.field_of(vector), self.alpha_of(vector), "solver")

    def basis_fields(self) -> List[Tuple[VectorField, Scalar]]:
        return [(self.field_of(d), self.alpha_of(d) if self.fixed_alpha is None else ZERO)
                for d in self.directions]

    def candidates(self) -> List[SolitonCandidate]:
        general = self.general()
        if general is not None:
            return [general]
        return [self.particular_candidate()] + [
            SolitonCandidate(self.metric, X, a, "solver direction") for X, a in self.basis_fields()]

    def contains(self, X: VectorField, alpha=None) -> bool:
        """Membership of X (affine in C1..C10 and α) in the solution set"""
        index = {u.key: c for c, u in enumerate(self.unknowns)}
        frame = change_basis(X, self.metric.frame_g.basis)
        parts: Dict[Optional[str], Dict[int, Scalar]] = {}
        for i, component in enumerate(frame.components):
            if not component:
                continue
            for (basis, exps), coeff in coefficients(component).items():
                column = index.get((i, basis, exps))
                if column is None:
                    return False
                split = _affine_parts(coeff)
                if split is None:
                    return False
                for key, value in split.items():
                    parts.setdefault(key, {})[column] = value
        column = self.system.alpha_column
        if column is not None:
            value = Scalar.coerce(alpha) if alpha is not None else self.alpha
            split = _affine_parts(value)
            if split is None:
                return False
            for key, part in split.items():
                parts.setdefault(key, {})[column] = part
        elif alpha is not None and Scalar.coerce(alpha) != self.fixed_alpha:
            return False
        parts.setdefault(None, {})
        for key, vector in parts.items():
            for row in self.pivots.values():
                total = ZERO
                for c, coeff in row.items():
                    if c != RHS and c in vector:
                        total = total + _as_scalar(coeff) * vector[c]
                target = _as_scalar(row.get(RHS, 0)) if key is None else ZERO
                if total != target:
                    return False
        return True

    def verify(self) -> bool:
        """Residual of the particular member and homogeneous residual of every direction vanish"""
        particular = self.particular_candidate()
        if not is_zero_tensor(residual(self.metric, particular.X, particular.alpha)):
            return False
        for X, alpha in self.basis_fields():
            lie = lie_derivative_metric(X, self.metric.g)
            if alpha:
                lie = lie + self.metric.g.scale(alpha)
            if not is_zero_tensor(lie):
                return False
        return True


def solve_soliton(g: MetricInstance, degree_bound: Optional[int] = None, trig: bool = False,
                  alpha=None, column_order: Optional[Sequence[int]] = None,
                  max_unknowns: Optional[int] = None, support: Optional[Iterable[Term]] = None) -> SolutionSpace:
    """Solve 2Ric + L_X g + αg = 0 for X of bounded degree; alpha=None leaves α unknown.

    With support given, X may only use those (component, basis function, monomial) terms.
    """
    degree = Config.DEFAULT_DEGREE if degree_bound is None else degree_bound
    if degree < 0 or degree > Config.MAX_DEGREE:
        raise ValueError(f"degree bound must be between 0 and {Config.MAX_DEGREE}")
    fixed = None if alpha is None else Scalar.coerce(alpha)
    system = assemble_system(g, degree, trig, fixed, max_unknowns, support)
    logger.solver(g.family, f"{len(system.unknowns)} unknowns, {len(system.rows)} equations, "
                            f"{'integer' if system.fraction_free else 'symbolic'} elimination")
    order = list(column_order) if column_order is not None else list(range(system.columns))
    if sorted(order) != list(range(system.columns)):
        raise ValueError("column order must be a permutation of the ansatz columns")
    pivots, inconsistent = gauss_jordan(system.rows, order, system.fraction_free)
    if inconsistent:
        raise NoSolution(g.family, degree, trig)
    free = [c for c in order if c not in pivots]

    def ratio(numerator, denominator):
        if system.fraction_free:
            return Fraction(numerator, denominator)
        return _as_scalar(numerator) / denominator

    particular = {}
    for column, row in pivots.items():
        if row.get(RHS):
            particular[column] = ratio(row[RHS], row[column])
    directions = []
    for f in free:
        direction = {f: Fraction(1) if system.fraction_free else ONE}
        for column, row in pivots.items():
            if f in row:
                direction[column] = ratio(-row[f], row[column])
        directions.append(direction)
    space = SolutionSpace(g, degree, trig, fixed, system, pivots, free, particular, directions)
    logger.solver(g.family, f"dimension {space.dimension}, alpha = {render_value(space.alpha)}")
    return space


# -- theorem certificates ----------------------------------------------------

THEOREMS = (2, 3, 4, 5, 7, 8)


def theorem_fixture(n: int) -> Dict[str, Any]:
    theorems = load_fixtures()["theorems"]
    if str(n) not in theorems:
        raise KeyError(f"no soliton theorem {n}; known: {', '.join(map(str, THEOREMS))}")
    return theorems[str(n)]


def _parse_binding(texts: Mapping[str, str]) -> Dict[str, Scalar]:
    return {name: parse_scalar(text) for name, text in texts.items()}


def printed_candidate(n: int, family_id: str) -> SolitonCandidate:
    """The printed (X, α) of a theorem for one of its metrics, parameters left symbolic"""
    data = theorem_fixture(n)
    substitution = _parse_binding(data.get("substitutions", {}).get(family_id, {}))
    components = [substitute(parse_extended(text), substitution) for text in data["field"]]
    alpha = substitute(parse_scalar(data["alpha"]), substitution)
    g = metric(family_id)
    return SolitonCandidate(g, VectorField(components, g.frame_g.basis), alpha, f"theorem {n}")


def _positive_params(family_id: str) -> List[str]:
    return family(family_id).positive_params()


def _resolve(n: int, candidate: SolitonCandidate, data: Mapping[str, Any]) -> Resolution:
    fam = family(candidate.metric.family)
    binding = dict(fam.sample_binding)
    resolution = Resolution(binding, data["degree"], data.get("trig", False))
    try:
        g = metric(fam.id, binding)
        space = solve_soliton(g, resolution.degree, resolution.trig, None)
    except EngineError as exc:
        resolution.error = str(exc)
        return resolution
    resolution.alpha = space.alpha
    resolution.classification = classify(space.alpha, binding, fam.positive_params())
    resolution.dimension = space.dimension
    X = VectorField([substitute(c, binding) for c in candidate.X.components], g.frame_g.basis)
    resolution.contains_printed_field = space.contains(X, space.alpha)
    resolution.verified = space.verify()

    support = field_support(X)
    resolution.shape_terms = len(support)
    try:
        shaped = solve_soliton(g, resolution.degree, resolution.trig, None, support=support)
    except NoSolution:
        logger.warning(f"theorem {n} on {fam.id}: no soliton field uses only the printed terms")
        return resolution
    resolution.shape_dimension = shaped.dimension
    resolution.matches_shape = shaped.verify()
    return resolution


_SOURCE_ORDER = ("1",) + AFFINE_SYMBOLS


def residual_sources(res: SymTensor2) -> List[str]:
    """Free constants and α the nonzero residual entries depend on; "1" stands for the rest"""
    names = set()
    for _, _, value in nonzero_entries(res):
        split = _affine_parts(value) if isinstance(value, Scalar) else None
        if split is None:
            names |= (value.free_symbols() & set(AFFINE_SYMBOLS)) or {"1"}
        else:
            names |= {key or "1" for key in split}
    return sorted(names, key=_SOURCE_ORDER.index)


def certify(candidate: SolitonCandidate, theorem: Optional[int] = None, claimed: Optional[str] = None,
            recorded: Optional[Mapping[str, Mapping[str, str]]] = None) -> SolitonCertificate:
    """Residual of a candidate; entries that match a recorded discrepancy carry its note"""
    g = candidate.metric
    res = residual(g, candidate.X, candidate.alpha)
    certificate = SolitonCertificate(
        theorem=theorem,
        family=g.family,
        candidate=candidate,
        residual=res,
        is_soliton=is_zero_tensor(res),
        classification=classify(candidate.alpha, g.rational_binding(), _positive_params(g.family)),
        claimed=claimed,
        failing_terms=residual_sources(res),
    )
    for a, b, value in nonzero_entries(res):
        item = {"entry": f"({a + 1},{b + 1})", "printed": "0", "computed": render_value(value)}
        known = (recorded or {}).get(item["entry"])
        if known is not None and parse_extended(known["computed"]) == value:
            item["note"] = known["note"]
        certificate.discrepancies.append(item)
    return certificate


def check_theorem(n: int) -> List[SolitonCertificate]:
    """Certificates for theorem n, one per metric it covers"""
    data = theorem_fixture(n)
    recorded = data.get("recorded", {})
    certificates = []
    for family_id in data["families"]:
        candidate = printed_candidate(n, family_id)
        certificate = certify(candidate, n, data.get("claims", {}).get(family_id), recorded)
        certificate.notes = list(data.get("notes", []))
        coordinate_field = VectorField(candidate.X.components, COORDINATE)
        certificate.coordinate_reading = is_zero_tensor(
            residual(candidate.metric, coordinate_field, candidate.alpha))
        if not certificate.is_soliton:
            certificate.resolution = _resolve(n, candidate, data)
            resolution = certificate.resolution
            printed_alpha = candidate.alpha.subs(resolution.binding)
            if resolution.alpha is not None and resolution.alpha != printed_alpha:
                item = {"entry": "alpha", "printed": render_value(printed_alpha),
                        "computed": render_value(resolution.alpha)}
                if "alpha" in recorded:
                    item["note"] = recorded["alpha"]["note"]
                certificate.discrepancies.append(item)
            if not resolution.matches_shape:
                certificate.notes.append(f"no field with the printed terms solves the equation for {family_id}")
        if certificate.claimed and certificate.claimed != certificate.classification.value:
            certificate.notes.append(
                f"text calls {family_id} {certificate.claimed.lower()}, "
                f"the printed α gives {certificate.classification.value.lower()}"
            )
        logger.check(f"theorem {n} on {family_id}", certificate.verified)
        certificates.append(certificate)
    return certificates
