"""Utility functions"""
import json
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Tuple

from config import Config
from ring import ALIASES, ParseError, parse_rational


@lru_cache(maxsize=4)
def _read_json(path: str) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def load_fixtures() -> Dict[str, Any]:
    """Load the printed-values fixture file"""
    return _read_json(Config.from_env().FIXTURES_PATH)


def load_schema() -> Dict[str, Any]:
    """Load the report JSON schema"""
    return _read_json(Config.from_env().SCHEMA_PATH)


def render_value(value: Any) -> str:
    """Canonical text of an engine value"""
    if value is None:
        return "null"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if hasattr(value, "render"):
        return value.render()
    return str(value)


def parse_param_flags(flags: Iterable[str]) -> Dict[str, Fraction]:
    """
    Parse repeated name=value flags
    Examples:
        ["lambda=2"] -> {"lambda": Fraction(2)}
        ["λ=1/2", "mu=3"] -> {"lambda": Fraction(1, 2), "mu": Fraction(3)}
    """
    binding: Dict[str, Fraction] = {}
    for flag in flags:
        if "=" not in flag:
            raise ValueError(f"expected name=value, got {flag!r}")
        name, text = (part.strip() for part in flag.split("=", 1))
        name = ALIASES.get(name, name)
        try:
            binding[name] = parse_rational(text)
        except ParseError as exc:
            raise ValueError(f"{name}: {exc}") from exc
    return binding


def parse_entry_key(key: str) -> Tuple[int, int]:
    """'1,2' -> (0, 1)"""
    i, j = key.split(",")
    return int(i) - 1, int(j) - 1


def parse_floats(text: str) -> List[float]:
    """'1,1,1,-1' -> [1.0, 1.0, 1.0, -1.0]"""
    return [float(part) for part in text.split(",") if part.strip()]
