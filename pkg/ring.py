"""Exact scalar arithmetic: polynomials over Q in the coordinates x, y, z, w with
coefficients that are rational functions of the catalog parameters."""
import re
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

# Symbol universe, fixed at import time. Order drives the canonical term order.
COORDS: Tuple[str, ...] = ("x", "y", "z", "w")
PARAMS: Tuple[str, ...] = (
    ("lambda", "mu", "a", "b", "c", "a1", "a2", "a3")
    + tuple(f"C{i}" for i in range(1, 11))
    + ("alpha", "f1", "f2", "f3", "f4")
)
SYMBOLS: Tuple[str, ...] = COORDS + PARAMS
NSYMS = len(SYMBOLS)
SYMBOL_INDEX: Dict[str, int] = {name: i for i, name in enumerate(SYMBOLS)}

DISPLAY_NAMES = {"lambda": "λ", "mu": "μ", "alpha": "α"}
ALIASES = {display: name for name, display in DISPLAY_NAMES.items()}

Exponents = Tuple[int, ...]
Number = Union[int, Fraction]


class EngineError(Exception):
    """Root of every error raised by the engine"""


class DivisionBySomethingContainingCoordinates(EngineError):
    def __init__(self, divisor: str):
        super().__init__(f"cannot divide by an expression in the coordinates: {divisor}")
        self.divisor = divisor


class DivisionByZero(EngineError):
    def __init__(self):
        super().__init__("division by zero")


class NotACoordinate(EngineError):
    def __init__(self, name: str):
        super().__init__(f"not a coordinate: {name!r} (expected one of {', '.join(COORDS)})")
        self.name = name


class UnboundSymbol(EngineError):
    def __init__(self, names: Iterable[str]):
        self.names = sorted(names, key=SYMBOL_INDEX.get)
        super().__init__(f"unbound symbol(s): {', '.join(self.names)}")


class DenominatorVanishes(EngineError):
    def __init__(self, expression: str):
        super().__init__(f"denominator vanishes when evaluating {expression}")
        self.expression = expression


class ParseError(EngineError):
    def __init__(self, text: str, position: int, message: str):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def symbol_index(name: str) -> int:
    """Index of a symbol, accepting the display spellings"""
    name = ALIASES.get(name, name)
    if name not in SYMBOL_INDEX:
        raise ParseError(name, 0, f"unknown symbol {name!r}")
    return SYMBOL_INDEX[name]


def display_name(name: str) -> str:
    return DISPLAY_NAMES.get(name, name)


def _zero_exps() -> Exponents:
    return (0,) * NSYMS


_ZERO_EXPS = _zero_exps()


def _order_key(exps: Exponents) -> Tuple[int, Exponents]:
    # graded lex: total degree first, then lex with x the largest symbol
    return (sum(exps), exps)


def _render_monomial(exps: Exponents) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e:
            name = display_name(SYMBOLS[i])
            parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _render_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Poly:
    """Sparse polynomial with rational coefficients over the full symbol universe.

    Terms map a dense exponent tuple to a nonzero Fraction; the map is canonical,
    so structural equality is mathematical equality.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponents, Number]] = None):
        clean: Dict[Exponents, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                if coeff:
                    clean[exps] = Fraction(coeff)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponents, Fraction]) -> "Poly":
        poly = cls.__new__(cls)
        poly.terms = terms
        poly._hash = None
        return poly

    @classmethod
    def constant(cls, value: Number) -> "Poly":
        return cls({_ZERO_EXPS: value})

    @classmethod
    def symbol(cls, name: Union[str, int]) -> "Poly":
        index = name if isinstance(name, int) else symbol_index(name)
        exps = [0] * NSYMS
        exps[index] = 1
        return cls._raw({tuple(exps): Fraction(1)})

    # -- queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZERO_EXPS in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get(_ZERO_EXPS, Fraction(0))

    def has_coordinates(self) -> bool:
        return any(exps[0] or exps[1] or exps[2] or exps[3] for exps in self.terms)

    def symbols(self) -> set:
        found = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    found.add(SYMBOLS[i])
        return found

    def degree(self) -> int:
        return max((sum(exps) for exps in self.terms), default=-1)

    def leading(self) -> Tuple[Exponents, Fraction]:
        exps = max(self.terms, key=_order_key)
        return exps, self.terms[exps]

    def sorted_terms(self) -> List[Tuple[Exponents, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: _order_key(item[0]), reverse=True)

    def sort_key(self) -> tuple:
        return tuple((_order_key(e), c) for e, c in self.sorted_terms())

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            total = terms.get(exps, 0) + coeff
            if total:
                terms[exps] = total
            else:
                terms.pop(exps, None)
        return Poly._raw(terms)

    def __neg__(self) -> "Poly":
        return Poly._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def scale(self, factor: Number) -> "Poly":
        factor = Fraction(factor)
        if not factor:
            return Poly._raw({})
        return Poly._raw({e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        if len(other.terms) == 1 and _ZERO_EXPS in other.terms:
            return self.scale(other.terms[_ZERO_EXPS])
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                total = terms.get(exps, 0) + c1 * c2
                if total:
                    terms[exps] = total
                else:
                    terms.pop(exps, None)
        return Poly._raw(terms)

    def __pow__(self, n: int) -> "Poly":
        result = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, exps: Exponents, sign: int = 1) -> "Poly":
        """Multiply (sign=1) or divide (sign=-1) by the monomial with these exponents"""
        return Poly._raw({
            tuple(a + sign * b for a, b in zip(e, exps)): c for e, c in self.terms.items()
        })

    def exact_divide(self, divisor: "Poly") -> Optional["Poly"]:
        """Quotient when divisor divides self exactly, otherwise None"""
        if divisor.is_zero():
            raise DivisionByZero()
        if self.is_zero():
            return self
        lead_exps, lead_coeff = divisor.leading()
        remainder = self
        quotient: Dict[Exponents, Fraction] = {}
        while not remainder.is_zero():
            r_exps, r_coeff = remainder.leading()
            if any(a < b for a, b in zip(r_exps, lead_exps)):
                return None
            q_exps = tuple(a - b for a, b in zip(r_exps, lead_exps))
            q_coeff = r_coeff / lead_coeff
            quotient[q_exps] = q_coeff
            remainder = remainder - divisor.shift(q_exps).scale(q_coeff)
        return Poly._raw(quotient)

    def partial(self, index: int) -> "Poly":
        terms: Dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e:
                lowered = list(exps)
                lowered[index] = e - 1
                terms[tuple(lowered)] = coeff * e
        return Poly._raw(terms)

    def evaluate(self, values: Sequence[Optional[Fraction]]) -> Fraction:
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for i, e in enumerate(exps):
                if e:
                    term *= values[i] ** e
            total += term
        return total

    def content(self) -> Fraction:
        """Positive rational c such that self / c has coprime integer coefficients"""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for coeff in self.terms.values():
            num = gcd(num, coeff.numerator)
            den = den * coeff.denominator // gcd(den, coeff.denominator)
        return Fraction(num, den)

    def min_exponents(self) -> Exponents:
        exps_list = list(self.terms)
        return tuple(min(e[i] for e in exps_list) for i in range(NSYMS))

    # -- protocol -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces: List[str] = []
        for exps, coeff in self.sorted_terms():
            mono = _render_monomial(exps)
            magnitude = abs(coeff)
            if not mono:
                body = _render_fraction(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{_render_fraction(magnitude)}*{mono}"
            if not pieces:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({self.render()})"


def factorize(poly: Poly) -> Tuple[Fraction, List[Tuple[Poly, int]]]:
    """Split a nonzero polynomial into a rational constant, single-symbol factors
    and a monic remainder. No further splitting is attempted."""
    exps, lead = poly.leading()
    monic = poly.scale(1 / lead)
    low = monic.min_exponents()
    factors: List[Tuple[Poly, int]] = []
    for i, e in enumerate(low):
        if e:
            factors.append((Poly.symbol(i), e))
    rest = monic.shift(low, -1) if any(low) else monic
    if not rest.is_constant():
        factors.append((rest, 1))
    return lead, factors


Denominator = Tuple[Tuple[Poly, int], ...]


def _den_poly(den: Denominator) -> Poly:
    result = Poly.constant(1)
    for factor, mult in den:
        result = result * factor ** mult
    return result


def _normalize(num: Poly, den: Dict[Poly, int]) -> Tuple[Poly, Denominator]:
    if num.is_zero():
        return num, ()
    kept = []
    for factor, mult in den.items():
        while mult:
            quotient = num.exact_divide(factor)
            if quotient is None:
                break
            num = quotient
            mult -= 1
        if mult:
            kept.append((factor, mult))
    kept.sort(key=lambda item: item[0].sort_key())
    return num, tuple(kept)


class Scalar:
    """Element of Q(params)[x, y, z, w].

    The denominator is a product of monic parameter polynomials with multiplicities.
    Equality is decided by cross-multiplication, so the stored form need not be reduced.
    """

    __slots__ = ("num", "den", "_den_poly")
    __hash__ = None

    def __init__(self, num: Union[Poly, Number] = 0, den: Optional[Mapping[Poly, int]] = None):
        if not isinstance(num, Poly):
            num = Poly.constant(num)
        merged: Dict[Poly, int] = {}
        if den:
            for factor, mult in den.items():
                if factor.has_coordinates():
                    raise DivisionBySomethingContainingCoordinates(factor.render())
                if mult:
                    merged[factor] = merged.get(factor, 0) + mult
        self.num, self.den = _normalize(num, merged)
        self._den_poly = None

    @classmethod
    def _raw(cls, num: Poly, den: Denominator) -> "Scalar":
        value = cls.__new__(cls)
        value.num = num
        value.den = den
        value._den_poly = None
        return value

    @classmethod
    def const(cls, value: Number) -> "Scalar":
        return cls._raw(Poly.constant(value), ())

    @classmethod
    def symbol(cls, name: str) -> "Scalar":
        return cls._raw(Poly.symbol(name), ())

    @staticmethod
    def coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar.const(value)
        if isinstance(value, Poly):
            return Scalar._raw(value, ())
        raise TypeError(f"cannot convert {type(value).__name__} to Scalar")

    def denominator(self) -> Poly:
        if self._den_poly is None:
            self._den_poly = _den_poly(self.den)
        return self._den_poly

    # -- queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def has_coordinates(self) -> bool:
        return self.num.has_coordinates()

    def free_symbols(self) -> set:
        names = self.num.symbols()
        for factor, _ in self.den:
            names |= factor.symbols()
        return names

    def as_rational(self) -> Optional[Fraction]:
        if self.den or not self.num.is_constant():
            return None
        return self.num.constant_value()

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar.const(other)
            else:
                return NotImplemented
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if not self.den and not other.den:
            return Scalar._raw(self.num + other.num, ())
        if self.den == other.den:
            num, den = _normalize(self.num + other.num, dict(self.den))
            return Scalar._raw(num, den)
        mine = dict(self.den)
        theirs = dict(other.den)
        lcm = dict(mine)
        for factor, mult in theirs.items():
            lcm[factor] = max(lcm.get(factor, 0), mult)
        left = self.num
        right = other.num
        for factor, mult in lcm.items():
            if mult > mine.get(factor, 0):
                left = left * factor ** (mult - mine.get(factor, 0))
            if mult > theirs.get(factor, 0):
                right = right * factor ** (mult - theirs.get(factor, 0))
        num, den = _normalize(left + right, lcm)
        return Scalar._raw(num, den)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw(-self.num, self.den)

    def __pos__(self) -> "Scalar":
        return self

    def __sub__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self + (-Scalar.coerce(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar.const(other) + (-self)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Scalar._raw(Poly._raw({}), ())
            return Scalar._raw(self.num.scale(other), self.den)
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num.terms or not other.num.terms:
            return Scalar._raw(Poly._raw({}), ())
        if not self.den and not other.den:
            return Scalar._raw(self.num * other.num, ())
        den = dict(self.den)
        for factor, mult in other.den:
            den[factor] = den.get(factor, 0) + mult
        num, den = _normalize(self.num * other.num, den)
        return Scalar._raw(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DivisionByZero()
            return Scalar._raw(self.num.scale(1 / Fraction(other)), self.den)
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZero()
        if other.num.has_coordinates():
            raise DivisionBySomethingContainingCoordinates(other.render())
        lead, factors = factorize(other.num)
        num = self.num.scale(1 / lead)
        for factor, mult in other.den:
            num = num * factor ** mult
        den = dict(self.den)
        for factor, mult in factors:
            den[factor] = den.get(factor, 0) + mult
        num, den = _normalize(num, den)
        return Scalar._raw(num, den)

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar.const(other) / self
        return NotImplemented

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return Scalar.const(1) / (self ** -n)
        if not self.den:
            return Scalar._raw(self.num ** n, ())
        return Scalar._raw(self.num ** n, tuple((f, m * n) for f, m in self.den))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.den and not other.den:
            return self.num == other.num
        return self.num * other.denominator() == other.num * self.denominator()

    # -- calculus and evaluation ---------------------------------------
    def partial(self, coordinate: str) -> "Scalar":
        if coordinate not in COORDS:
            raise NotACoordinate(coordinate)
        num, den = _normalize(self.num.partial(SYMBOL_INDEX[coordinate]), dict(self.den))
        return Scalar._raw(num, den)

    def evaluate(self, binding: Mapping[str, Number]) -> Fraction:
        missing = {name for name in self.free_symbols() if name not in binding}
        if missing:
            raise UnboundSymbol(missing)
        values = [Fraction(binding[name]) if name in binding else None for name in SYMBOLS]
        den = self.denominator().evaluate(values)
        if not den:
            raise DenominatorVanishes(self.render())
        return self.num.evaluate(values) / den

    def subs(self, binding: Mapping[str, Union["Scalar", Number]]) -> "Scalar":
        """Substitute symbols by rationals or Scalars; unmentioned symbols stay symbolic"""
        active = {name: Scalar.coerce(v) for name, v in binding.items() if name in self.free_symbols()}
        if not active:
            return self
        num = _subs_poly(self.num, active)
        den = _subs_poly(self.denominator(), active)
        if den.is_zero():
            raise DenominatorVanishes(self.render())
        return num / den

    def compile(self) -> Callable[[Mapping[str, float]], float]:
        """Float evaluator over a name -> float mapping"""
        def terms_of(poly: Poly):
            return [
                (float(coeff), [(SYMBOLS[i], e) for i, e in enumerate(exps) if e])
                for exps, coeff in poly.terms.items()
            ]

        num_terms = terms_of(self.num)
        den_terms = terms_of(self.denominator())

        def run(terms, values):
            total = 0.0
            for coeff, powers in terms:
                for name, e in powers:
                    coeff *= values[name] ** e
                total += coeff
            return total

        def evaluate(values: Mapping[str, float]) -> float:
            return run(num_terms, values) / run(den_terms, values)

        return evaluate

    # -- rendering ------------------------------------------------------
    def render(self) -> str:
        if not self.den:
            return self.num.render()
        if self.num.is_zero():
            return "0"
        content = self.num.content()
        top = self.num.scale(1 / content).scale(content.numerator)
        bottom: List[str] = []
        if content.denominator != 1:
            bottom.append(str(content.denominator))
        for factor, mult in self.den:
            text = factor.render()
            if len(factor.terms) > 1:
                text = f"({text})"
            bottom.append(text if mult == 1 else f"{text}^{mult}")
        top_text = top.render()
        if len(top.terms) > 1:
            top_text = f"({top_text})"
        bottom_text = "*".join(bottom)
        if len(bottom) > 1:
            bottom_text = f"({bottom_text})"
        return f"{top_text}/{bottom_text}"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Scalar({self.render()})"


def _subs_poly(poly: Poly, active: Mapping[str, Scalar]) -> Scalar:
    indices = {SYMBOL_INDEX[name]: value for name, value in active.items()}
    powers: Dict[Tuple[int, int], Scalar] = {}
    total = Scalar.const(0)
    for exps, coeff in poly.terms.items():
        kept = list(exps)
        term = Scalar.const(coeff)
        for i, value in indices.items():
            e = exps[i]
            if e:
                kept[i] = 0
                if (i, e) not in powers:
                    powers[(i, e)] = value ** e
                term = term * powers[(i, e)]
        total = total + term * Scalar._raw(Poly._raw({tuple(kept): Fraction(1)}), ())
    return total


ZERO = Scalar.const(0)
ONE = Scalar.const(1)


def sym(name: str) -> Scalar:
    return Scalar.symbol(ALIASES.get(name, name))


def const(value: Number) -> Scalar:
    return Scalar.const(value)


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?)|(?P<name>[A-Za-z_λμα][A-Za-z_0-9λμα]*)|(?P<op>\*\*|[-+*/^(),]))"
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if not match:
            raise ParseError(text, pos, f"unexpected character {stripped[pos]!r}")
        kind = match.lastgroup
        value = match.group(kind)
        start = match.start(kind)
        if kind == "number" and "." in value:
            raise ParseError(text, start, "decimal literals are not exact; write p/q")
        tokens.append((kind, "^" if value == "**" else value, start))
        pos = match.end()
    tokens.append(("end", "", len(stripped)))
    return tokens


class _Parser:
    def __init__(self, text: str, functions: Mapping[str, Callable], names: Mapping[str, object]):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.functions = functions
        self.names = names

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def take(self) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, value: str):
        kind, got, pos = self.take()
        if got != value or kind != "op":
            raise ParseError(self.text, pos, f"expected {value!r}")

    def parse(self):
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError(self.text, pos, "unexpected trailing input")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, _ = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except TypeError:
                    raise ParseError(self.text, pos, "unsupported division")
        return value

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value in ("-", "+"):
            self.take()
            operand = self.unary()
            return -operand if value == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.take()
            exponent = self.unary()
            n = exponent.as_rational() if isinstance(exponent, Scalar) else None
            if n is None or n.denominator != 1 or n < 0:
                raise ParseError(self.text, pos, "exponent must be a non-negative integer")
            if n == 0:
                return ONE
            result = base
            for _ in range(int(n) - 1):
                result = result * base
            return result
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "number":
            return Scalar.const(int(value))
        if kind == "name":
            if value in self.functions:
                self.expect("(")
                argument = self.expr()
                self.expect(")")
                return self.functions[value](argument)
            if value in self.names:
                return self.names[value]
            name = ALIASES.get(value, value)
            if name not in SYMBOL_INDEX:
                raise ParseError(self.text, pos, f"unknown symbol {value!r}")
            return Scalar.symbol(name)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(self.text, pos, "expected a number, symbol or '('")


def parse_scalar(text: str,
                 functions: Optional[Mapping[str, Callable]] = None,
                 names: Optional[Mapping[str, object]] = None):
    """Parse the canonical text form (+ - * / ^ and parentheses) into a Scalar.

    ``functions`` and ``names`` extend the grammar; values they produce only need to
    support the arithmetic operators, so the result may be another algebra's element.
    """
    return _Parser(text, functions or {}, names or {}).parse()


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational binding value: an integer or p/q, optionally signed"""
    value = parse_scalar(text)
    rational = value.as_rational() if isinstance(value, Scalar) else None
    if rational is None:
        raise ParseError(text, 0, "expected an exact rational such as 3 or -2/5")
    return rational
