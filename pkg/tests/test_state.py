import math

import numpy as np
import pytest

from hunter_saxton.errors import NonMonotoneInput, WindowTooSmall
from hunter_saxton.reference import make_initial
from hunter_saxton.state import (
    BreakpointState,
    GridSpec,
    GridState,
    evaluate,
    project,
    support_window,
    tau_f,
    total_variation,
    validate,
)


def peakon_grid(dx=0.25):
    return GridSpec(-2.0, dx, int(round(5 / dx)) + 1)


def test_grid_spec_rejects_bad_shape():
    with pytest.raises(ValueError):
        GridSpec(0.0, 0.0, 4)
    with pytest.raises(ValueError):
        GridSpec(0.0, 0.1, 1)


def test_covering_is_aligned_and_contains():
    g = GridSpec.covering(-0.3, 1.1, 0.25)
    assert g.x0 == -0.5 and g.x_end == 1.25
    assert np.allclose(g.nodes / 0.25, np.round(g.nodes / 0.25))


def test_project_peakon_reproduces_data_at_nodes():
    data = make_initial("peakon")
    g = peakon_grid()
    s = project(data, g)
    x = g.nodes
    assert np.array_equal(s.U, np.clip(1 - x, 0, 1))
    assert np.array_equal(s.F, np.clip(x, 0, 1))
    fine = np.linspace(-2, 3, 1001)
    u, F = evaluate(s, fine)
    assert np.allclose(u, data.u0(fine), atol=1e-15)
    assert np.allclose(F, data.F0(fine), atol=1e-15)


def test_project_cusp_at_origin():
    s = project(make_initial("cusp"), GridSpec(-2.0, 0.25, 17))
    j = int(np.flatnonzero(s.nodes == 0.0)[0])
    assert s.F[j] == pytest.approx(4 / 3, abs=1e-15)


def test_project_constant_data():
    data = make_initial(custom=[(0, 0.7, 0), (1, 0.7, 0)], f_inf=0.0)
    s = project(data, GridSpec(-1.0, 0.5, 7))
    assert np.all(s.U == 0.7) and np.all(s.F == 0.0)


def test_project_rejects_short_window():
    with pytest.raises(WindowTooSmall):
        project(make_initial("peakon"), GridSpec(-1.0, 0.25, 6))


def test_project_rejects_decreasing_F():
    b = BreakpointState([0, 1, 2], [0, 0, 0], [0, 0.5, 0.4], 0.4)
    with pytest.raises(NonMonotoneInput):
        project(b, GridSpec(-1.0, 0.5, 9))


def test_evaluate_examples():
    s = project(make_initial("peakon"), peakon_grid())
    assert evaluate(s, 0.5) == (0.5, 0.5)
    assert evaluate(s, -100.0) == (s.U[0], 0.0)
    assert evaluate(s, 100.0) == (s.U[-1], 1.0)


def test_evaluate_cusp_midpoint():
    s = project(make_initial("cusp"), GridSpec(-2.0, 0.25, 17))
    u, _ = evaluate(s, 0.125)
    assert u == pytest.approx(0.25 ** (2 / 3) / 2, abs=1e-15)
    assert u == pytest.approx(0.19843, abs=1e-5)


def test_validate_peakon_ok():
    assert validate(project(make_initial("peakon"), peakon_grid())).ok


def test_validate_cell_energy_violation():
    s = GridState(GridSpec(0.0, 1.0, 3), [0.0, 2.0, 2.0], [0.0, 1.0, 1.0], 1.0)
    r = validate(s)
    assert r.checks_failed() == {"cell_energy"}
    (v,) = r.violations
    assert v.index == 0 and v.magnitude == pytest.approx(3.0)


def test_validate_monotonicity_violation_index():
    F = np.array([0, 0.1, 0.2, 0.3, 0.5, 0.5 - 1e-9, 0.6, 1.0])
    s = GridState(GridSpec(0.0, 1.0, 8), np.zeros(8), F, 1.0)
    r = validate(s)
    assert ("F_monotone", 5) in [(v.check, v.index) for v in r.violations]
    # a negative increment also breaks (dU)^2 <= dF dx in that cell
    assert r.checks_failed() == {"F_monotone", "cell_energy"}


def test_validate_tolerates_round_off():
    tol = tau_f(1.0)
    F = np.array([0.0, 0.5, 0.5 - tol / 2, 1.0])
    s = GridState(GridSpec(0.0, 1.0, 4), np.zeros(4), F, 1.0)
    assert validate(s).ok


def test_validate_window_edges():
    s = GridState(GridSpec(0.0, 1.0, 3), np.zeros(3), [0.1, 0.5, 0.9], 1.0)
    assert validate(s).checks_failed() == {"window_left", "window_right"}


def test_validate_nonfinite_and_negative_energy():
    s = GridState(GridSpec(0.0, 1.0, 3), [0.0, math.nan, 0.0], [0.0, 0.0, 0.0], 0.0)
    assert "finite" in validate(s).checks_failed()


def test_report_to_dict():
    s = GridState(GridSpec(0.0, 1.0, 3), [0.0, 2.0, 2.0], [0.0, 1.0, 1.0], 1.0)
    d = validate(s).to_dict()
    assert d["ok"] is False and d["violations"][0]["check"] == "cell_energy"


def test_total_variation_peakon():
    assert total_variation(project(make_initial("peakon"), peakon_grid())) == 1.0


def test_support_window_peakon():
    a, b = support_window(make_initial("peakon"), 1.0, 0.25, 0.25)
    assert a == pytest.approx(-0.625, abs=1e-15)
    assert b == pytest.approx(2.625, abs=1e-15)


def test_support_window_matches_dense_scan():
    data = make_initial("cusp")
    T, dt, dx = 4.0, 0.148, 0.25
    a, b = support_window(data, T, dt, dx)
    t = np.linspace(0, T, 40001)
    f = data.f_inf
    lo = -1 + data.u_left * t - (t / 8 + 4 * dt) * f * t - 2 * dx
    hi = 1 + data.u_right * t + (t / 8 + 4 * dt) * f * t + 2 * dx
    assert a <= lo.min() + 1e-12 and a >= lo.min() - 1e-6
    assert b >= hi.max() - 1e-12 and b <= hi.max() + 1e-6


def test_support_window_at_zero_time():
    assert support_window(make_initial("peakon"), 0.0, 0.25, 0.25) == (-0.5, 1.5)


def test_states_are_read_only():
    s = project(make_initial("peakon"), peakon_grid())
    with pytest.raises(ValueError):
        s.U[0] = 3.0
