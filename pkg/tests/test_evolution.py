import math

import numpy as np
import pytest

from hunter_saxton.errors import BreakpointCollision, DtExceedsCfl, TauExceedsCfl, ZeroEnergyNeedsDt
from hunter_saxton.evolution import (
    CflParams,
    cfl_bound,
    cfl_dt,
    eval_at,
    evolve,
    kernel_discrepancy,
    min_gap,
    plan_times,
    resample,
    resample_closed_form,
    run,
    step,
)
from hunter_saxton.reference import make_initial
from hunter_saxton.state import GridSpec, GridState, evaluate, project, validate


def ramp_state(x0):
    # one cell of width 4 carrying the peakon ramp's left and right node values
    return GridState(GridSpec(x0, 4.0, 2), [1.0, 0.0], [0.0, 1.0], 1.0)


def test_cfl_dt_values():
    assert cfl_dt(1.0, 0.25) == 0.25
    assert cfl_dt(8 / 3, 0.25) == pytest.approx(0.1530931089, rel=1e-9)
    assert cfl_dt(1.0, 0.25, CflParams(alpha=0.5)) == 0.125
    assert cfl_dt(0.0, 0.25, CflParams(dt_override=0.1)) == 0.1
    assert cfl_dt(1.0, 0.25, CflParams(dt_override=0.1)) == 0.1


def test_cfl_dt_errors():
    with pytest.raises(ZeroEnergyNeedsDt):
        cfl_dt(0.0, 0.25)
    with pytest.raises(DtExceedsCfl):
        cfl_dt(1.0, 0.25, CflParams(dt_override=0.3))
    with pytest.raises(ValueError):
        cfl_dt(1.0, 0.0)
    with pytest.raises(ValueError):
        CflParams(alpha=1.5)
    with pytest.raises(ValueError):
        CflParams(dt_override=-1.0)


def test_evolve_left_node_follows_exact_kink():
    b = evolve(ramp_state(0.0), 1.0)
    assert (b.xs[0], b.U[0], b.F[0]) == (0.875, 0.75, 0.0)


def test_evolve_right_node_follows_exact_kink():
    b = evolve(ramp_state(-3.0), 1.0)
    assert (b.xs[1], b.U[1], b.F[1]) == (1.125, 0.25, 1.0)


def test_evolve_zero_time_is_identity():
    s = project(make_initial("cusp"), GridSpec(-3.0, 0.25, 25))
    b = evolve(s, 0.0)
    assert np.array_equal(b.xs, s.nodes) and np.array_equal(b.U, s.U) and np.array_equal(b.F, s.F)
    assert min_gap(b) == 0.25


def test_evolve_rejects_large_tau():
    s = project(make_initial("peakon"), GridSpec(-2.0, 0.25, 21))
    with pytest.raises(TauExceedsCfl):
        evolve(s, 0.26)
    with pytest.raises(TauExceedsCfl):
        evolve(s, -0.1)


def test_evolve_detects_collision():
    # violates the cell energy inequality, so characteristics can cross
    s = GridState(GridSpec(0.0, 1.0, 2), [1.0, -1.0], [0.0, 0.0], 0.0)
    with pytest.raises(BreakpointCollision):
        evolve(s, 1.0)


def test_evolved_state_valid(peakon_run):
    for s, h in zip(peakon_run.states, peakon_run.steps):
        b = evolve(s, float(h))
        assert validate(b).ok
        assert min_gap(b) >= 0.25 / 2


def test_first_step_matches_exact_values(peakon_run):
    s1 = peakon_run.states[1]
    u, F = evaluate(s1, 1.0)
    assert u == pytest.approx(1 / 14, abs=1e-15)
    assert F == pytest.approx(97 / 98, abs=1e-15)


def test_first_step_equals_exact_at_all_nodes(peakon, peakon_run):
    s1 = peakon_run.states[1]
    assert np.allclose(s1.U, peakon.u(0.25, s1.nodes), atol=1e-15)
    assert np.allclose(s1.F, peakon.F(0.25, s1.nodes), atol=1e-15)


def test_resample_zero_tau_returns_state(peakon_run):
    s = peakon_run.states[5]
    r = resample(evolve(s, 0.0), s.grid)
    assert np.array_equal(r.U, s.U) and np.array_equal(r.F, s.F)
    c = resample_closed_form(s, 0.0)
    assert np.array_equal(c.U, s.U) and np.array_equal(c.F, s.F)


def test_constant_state_is_fixed():
    s = GridState(GridSpec(0.0, 0.1, 11), np.full(11, 0.3), np.zeros(11), 0.0)
    for tau in (0.0, 0.05, 1.0, 7.3):
        r = step(s, tau)
        assert np.array_equal(r.U, s.U) and np.array_equal(r.F, s.F)


def test_two_half_steps_differ_but_stay_valid(peakon_run):
    s = peakon_run.states[8]
    one = step(s, 0.25)
    two = step(step(s, 0.125), 0.125)
    assert validate(one).ok and validate(two).ok
    assert one.f_inf == two.f_inf == s.f_inf
    assert not np.array_equal(one.U, two.U)


def test_eval_at_tau_zero(peakon_run):
    s = peakon_run.states[3]
    assert eval_at(s, 0.0, 0.7) == evaluate(s, 0.7)


def test_state_continuous_across_step_boundary(peakon_run):
    s0, s1 = peakon_run.states[0], peakon_run.states[1]
    assert np.array_equal(step(s0, 0.25).U, s1.U)
    assert np.array_equal(peakon_run.state_at(0.25).U, s1.U)


def test_intermediate_time_matches_exact(peakon, peakon_run):
    u, F = evaluate(peakon_run.state_at(0.125), 1.0)
    # nodes are exact after a partial first step; x=1 is a node
    assert u == pytest.approx(peakon.u(0.125, 1.0), abs=1e-15)
    assert F == pytest.approx(peakon.F(0.125, 1.0), abs=1e-15)


def test_peakon_run_shape(peakon, peakon_run):
    assert len(peakon_run.times) == 17 and peakon_run.dt == 0.25
    assert np.allclose(peakon_run.steps, 0.25)
    s = peakon_run.snapshot(4.0)
    u, F = evaluate(s, 2.5)
    assert abs(u - 0.5) < 0.1 and abs(F - 0.5) < 0.1
    assert evaluate(s, -5.0)[0] == pytest.approx(0.0, abs=0.1)
    assert evaluate(s, 10.0)[0] == pytest.approx(1.0, abs=0.1)


def test_cusp_dt_alignment():
    ex = make_initial("cusp")
    traj = run(ex, 0.25, CflParams(), 4.0, (0.0, 1.93, 4.0))
    assert 1.93 in traj.times
    assert traj.steps[0] == pytest.approx(1.93 / 13, rel=1e-12)
    assert traj.max_step <= cfl_bound(ex.f_inf, 0.25)


def test_zero_final_time():
    traj = run(make_initial("peakon"), 0.25, CflParams(), 0.0)
    assert traj.times == (0.0,) and len(traj.states) == 1


def test_run_rejects_bad_snapshots():
    with pytest.raises(ValueError):
        run(make_initial("peakon"), 0.25, CflParams(), 1.0, (2.0,))


def test_run_window_extends_grid():
    traj = run(make_initial("peakon"), 0.25, CflParams(), 1.0, window=(-10.0, 12.0))
    assert traj.grid.x0 <= -10.0 and traj.grid.x_end >= 12.0


def test_run_invariants(cusp):
    traj = run(cusp.initial, 0.125, CflParams(), 4.0, (1.93,))
    assert all(b > a for a, b in zip(traj.times, traj.times[1:]))
    for s in traj.states:
        assert validate(s).ok
        assert s.f_inf == cusp.initial.f_inf
        assert abs(s.F[-1] - s.f_inf) <= 1e-12 * s.f_inf


def test_run_is_deterministic(cusp):
    a = run(cusp.initial, 0.125, CflParams(), 2.0)
    b = run(cusp.initial, 0.125, CflParams(), 2.0)
    assert all(np.array_equal(x.U, y.U) and np.array_equal(x.F, y.F) for x, y in zip(a.states, b.states))


def test_kernels_agree(peakon_run):
    assert kernel_discrepancy(peakon_run) <= 1e-12


def test_plan_times_uniform_when_possible():
    t = plan_times(4.0, 0.25)
    assert len(t) == 17 and t[-1] == 4.0


def test_plan_times_segments():
    t = plan_times(4.0, 0.153, (1.93,))
    assert 1.93 in t and t[-1] == 4.0
    h = np.diff(t)
    assert h.max() <= 0.153 and np.allclose(h[:13], 1.93 / 13)


def test_plan_times_zero():
    assert plan_times(0.0, 0.1) == [0.0]


def test_worst_case_cell_gap_is_nine_sixteenths():
    # (dU)^2 = dF dx = F dx at the largest admissible step; the width is (sqrt(dx) - sqrt(dx)/4)^2
    for f, dx in [(1.0, 0.25), (8 / 3, 0.0625), (2.0, 1e-3)]:
        s = GridState(GridSpec(0.0, dx, 2), [0.0, -math.sqrt(f * dx)], [0.0, f], f)
        gap = min_gap(evolve(s, cfl_bound(f, dx)))
        assert gap == pytest.approx(9 * dx / 16, rel=1e-12)
        assert gap >= dx / 2
