"""Tests for the diagonal Ricci flow integrator"""
import json

import numpy as np
import pytest

from flow import (CSV_HEADER, DegenerateMetric, FlowConfig, FlowState, diagonal_ricci_rhs, exact_rhs,
                  flow_consistency, integrate, rk4_step, to_json, write_csv)


def test_rhs_at_unit_metric():
    assert np.allclose(diagonal_ricci_rhs([1, 1, 1, 1]), [1, 1, -1, 0])
    assert np.allclose(diagonal_ricci_rhs([1, 1, 1, -1]), [1, 1, -1, 0])


def test_rhs_matches_exact_evaluation():
    f = [2.0, 0.5, -1.5, -1.0]
    assert np.allclose(diagonal_ricci_rhs(f), exact_rhs(f))
    # -2 Ric_ii = (f3/f2, f3/f1, -f3^2/(f1 f2), 0)
    assert np.allclose(diagonal_ricci_rhs(f), [-3.0, -0.75, -2.25, 0.0])


def test_rhs_is_symmetric_in_the_first_two_coefficients():
    a = diagonal_ricci_rhs([2.0, 3.0, 1.0, -1.0])
    b = diagonal_ricci_rhs([3.0, 2.0, 1.0, -1.0])
    assert np.allclose(a[[1, 0, 2, 3]], b)


def test_fourth_coefficient_is_constant():
    states = integrate(FlowState(0.0, (1.0, 1.0, 1.0, -1.0)), FlowConfig(step=0.01, t_end=0.5))
    assert all(state.f[3] == -1.0 for state in states)
    assert states[-1].t == pytest.approx(0.5)


def test_flow_consistency():
    assert flow_consistency([1.0, 2.0, 0.5, -1.0]) < 1e-6


def _final(h: float, t_end: float = 0.5) -> np.ndarray:
    states = integrate(FlowState(0.0, (1.0, 1.0, 1.0, -1.0)), FlowConfig(step=h, t_end=t_end))
    return np.array(states[-1].f)


def test_fourth_order_convergence():
    reference = _final(0.00625)
    coarse = np.max(np.abs(_final(0.05) - reference))
    fine = np.max(np.abs(_final(0.025) - reference))
    assert 12 <= coarse / fine <= 20


def test_partial_last_step():
    states = integrate(FlowState(0.0, (1.0, 1.0, 1.0, -1.0)), FlowConfig(step=0.2, t_end=0.5))
    assert [round(s.t, 9) for s in states] == [0.0, 0.2, 0.4, 0.5]


def test_sampling():
    states = integrate(FlowState(0.0, (1.0, 1.0, 1.0, -1.0)),
                       FlowConfig(step=0.1, t_end=1.0, sample_every=5))
    assert len(states) == 3
    assert states[-1].t == 1.0


def test_degenerate_metric():
    with pytest.raises(DegenerateMetric):
        diagonal_ricci_rhs([1.0, 1.0, 0.0, -1.0])
    with pytest.raises(DegenerateMetric):
        integrate(FlowState(0.0, (1.0, 1.0, 1e-12, -1.0)))
    with pytest.raises(DegenerateMetric):
        rk4_step(np.array([0.0, 1.0, 1.0, 1.0]), 0.1)


def test_invalid_configuration():
    with pytest.raises(ValueError):
        FlowConfig(step=0)
    with pytest.raises(ValueError):
        FlowConfig(sample_every=0)


def test_outputs(tmp_path):
    states = integrate(FlowState(0.0, (1.0, 1.0, 1.0, -1.0)), FlowConfig(step=0.1, t_end=0.2))
    path = tmp_path / "flow.csv"
    write_csv(states, str(path))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(CSV_HEADER) == "t,f1,f2,f3,f4"
    assert len(lines) == len(states) + 1
    payload = json.loads(to_json(states))
    assert payload["family"] == "diagonal_flow"
    assert len(payload["trajectory"]) == len(states)
    assert set(payload["rhs"]) == {"f1", "f2", "f3", "f4"}
