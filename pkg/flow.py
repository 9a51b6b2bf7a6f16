"""Ricci flow dg/dt = -2 Ric[g] on the diagonal family f1 ω1² + f2 ω2² + f3 ω3² + f4 ω4² of H3xR"""
import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from catalog import metric
from config import Config
from curvature import ricci
from logger import get_logger
from ring import EngineError

logger = get_logger()

FLOW_FAMILY = "diagonal_flow"
FLOW_PARAMS = ("f1", "f2", "f3", "f4")
CSV_HEADER = ("t",) + FLOW_PARAMS


class DegenerateMetric(EngineError):
    def __init__(self, time: float, values: Sequence[float]):
        super().__init__(f"metric degenerates at t = {time:g}: f = {tuple(float(v) for v in values)}")
        self.time = time
        self.values = tuple(float(v) for v in values)


@dataclass(frozen=True)
class FlowState:
    t: float
    f: Tuple[float, float, float, float]

    def to_dict(self) -> Dict[str, float]:
        return {"t": self.t, **dict(zip(FLOW_PARAMS, self.f))}


@dataclass
class FlowConfig:
    step: float = Config.FLOW_STEP
    t_end: float = Config.FLOW_T_END
    degeneracy_tolerance: float = Config.DEGENERACY_TOL
    sample_every: int = Config.FLOW_SAMPLE_EVERY

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be non-negative")
        if self.degeneracy_tolerance <= 0:
            raise ValueError("degeneracy tolerance must be positive")
        if self.sample_every < 1:
            raise ValueError("sample_every must be at least 1")


@lru_cache(maxsize=1)
def _compiled_rhs() -> Tuple[Callable[[Dict[str, float]], float], ...]:
    """-2 Ric_ii of the symbolic diagonal family, compiled to float evaluators"""
    data = ricci(metric(FLOW_FAMILY))
    diagonal = [data.ricci.components[i][i] * -2 for i in range(4)]
    if diagonal[3]:
        raise EngineError("fourth Ricci component of the diagonal family is not zero")
    logger.debug("flow rhs: " + ", ".join(value.render() for value in diagonal))
    return tuple(value.compile() for value in diagonal)


def rhs_expressions() -> List[str]:
    data = ricci(metric(FLOW_FAMILY))
    return [(data.ricci.components[i][i] * -2).render() for i in range(4)]


def _check(f: np.ndarray, t: float, tol: float):
    if np.any(np.abs(f) < tol) or not np.all(np.isfinite(f)):
        raise DegenerateMetric(t, f)


def diagonal_ricci_rhs(f: Sequence[float], tol: float = Config.DEGENERACY_TOL, t: float = 0.0) -> np.ndarray:
    """-2 Ric frame components at the diagonal metric with coefficients f"""
    f = np.asarray(f, dtype=float)
    _check(f, t, tol)
    values = dict(zip(FLOW_PARAMS, (float(v) for v in f)))
    return np.array([evaluate(values) for evaluate in _compiled_rhs()])


def exact_rhs(f: Sequence[float]) -> np.ndarray:
    """-2 Ric evaluated through an exactly bound metric instance"""
    binding = {name: Fraction(float(v)) for name, v in zip(FLOW_PARAMS, f)}
    data = ricci(metric(FLOW_FAMILY, binding))
    return np.array([float(data.ricci.components[i][i].as_rational() * -2) for i in range(4)])


def rk4_step(f: np.ndarray, h: float, t: float = 0.0, tol: float = Config.DEGENERACY_TOL) -> np.ndarray:
    """One classical Runge-Kutta step"""
    k1 = diagonal_ricci_rhs(f, tol, t)
    k2 = diagonal_ricci_rhs(f + h / 2 * k1, tol, t + h / 2)
    k3 = diagonal_ricci_rhs(f + h / 2 * k2, tol, t + h / 2)
    k4 = diagonal_ricci_rhs(f + h * k3, tol, t + h)
    return f + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate(initial: FlowState, cfg: FlowConfig = None) -> List[FlowState]:
    """RK4 trajectory from initial up to cfg.t_end; sampled every cfg.sample_every steps"""
    cfg = cfg or FlowConfig()
    f = np.asarray(initial.f, dtype=float)
    t = float(initial.t)
    _check(f, t, cfg.degeneracy_tolerance)
    states = [FlowState(t, tuple(float(v) for v in f))]
    end = t + cfg.t_end
    steps = int(np.floor(cfg.t_end / cfg.step + 1e-9))
    remainder = cfg.t_end - steps * cfg.step
    if remainder <= cfg.step * 1e-9:
        remainder = 0.0
    sizes = [cfg.step] * steps + ([remainder] if remainder else [])
    for n, h in enumerate(sizes, start=1):
        f = rk4_step(f, h, t, cfg.degeneracy_tolerance)
        t = end if n == len(sizes) else initial.t + n * cfg.step
        _check(f, t, cfg.degeneracy_tolerance)
        if n % cfg.sample_every == 0 or n == len(sizes):
            states.append(FlowState(t, tuple(float(v) for v in f)))
    logger.debug(f"flow: {len(sizes)} steps, {len(states)} samples, t = {t:g}")
    return states


def flow_consistency(f: Sequence[float], h: float = 1e-4) -> float:
    """max |central difference of the RK4 flow at t=0 + 2 Ric[g(0)]|"""
    f = np.asarray(f, dtype=float)
    derivative = (rk4_step(f, h) - rk4_step(f, -h)) / (2 * h)
    return float(np.max(np.abs(derivative - exact_rhs(f))))


def write_csv(states: Sequence[FlowState], path: str):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for state in states:
            writer.writerow([repr(state.t)] + [repr(v) for v in state.f])


def to_json(states: Sequence[FlowState]) -> str:
    payload = {
        "family": FLOW_FAMILY,
        "rhs": dict(zip(FLOW_PARAMS, rhs_expressions())),
        "trajectory": [state.to_dict() for state in states],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False)


def write_json(states: Sequence[FlowState], path: str):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(to_json(states) + "\n", encoding="utf-8")
