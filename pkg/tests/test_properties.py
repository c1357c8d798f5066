"""Randomized invariants of projection, evolution and rate fitting."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import covering_grid, random_breakpoint_state
from hunter_saxton.analysis.convergence import fit_rate
from hunter_saxton.evolution import cfl_bound, evolve, min_gap, resample, resample_closed_form
from hunter_saxton.state import evaluate, project, validate

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_projection_is_idempotent(seed):
    rng = np.random.default_rng(seed)
    b = random_breakpoint_state(rng)
    g = covering_grid(rng, b)
    p = project(b, g)
    q = project(p, g)
    assert np.array_equal(p.U, q.U) and np.array_equal(p.F, q.F)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_projection_stays_admissible(seed):
    rng = np.random.default_rng(seed)
    b = random_breakpoint_state(rng)
    assert validate(b).ok
    assert validate(project(b, covering_grid(rng, b))).ok


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_F_is_monotone_in_x(seed):
    rng = np.random.default_rng(seed)
    b = random_breakpoint_state(rng)
    x = np.sort(rng.uniform(b.xs[0] - 1, b.xs[-1] + 1, 500))
    _, F = evaluate(b, x)
    assert np.all(np.diff(F) >= -1e-12 * max(1, b.f_inf))


@settings(max_examples=100, deadline=None)
@given(seeds, st.floats(0.0, 1.0))
def test_step_keeps_admissibility_and_gap(seed, frac):
    rng = np.random.default_rng(seed)
    b = random_breakpoint_state(rng)
    s = project(b, covering_grid(rng, b))
    tau = frac * cfl_bound(s.f_inf, s.grid.dx)
    e = evolve(s, tau)
    assert validate(e).ok
    assert min_gap(e) >= s.grid.dx / 2 - 1e-12
    # pad the grid so the moved support stays inside
    pad = int(math.ceil((np.abs(s.U).max() * tau + s.f_inf * tau * tau) / s.grid.dx)) + 2
    g = type(s.grid)(s.grid.x0 - pad * s.grid.dx, s.grid.dx, s.grid.n + 2 * pad)
    wide = project(s, g)
    r = resample(evolve(wide, tau), g)
    c = resample_closed_form(wide, tau)
    assert validate(r).ok
    scale = 1 + np.abs(wide.U).max() + wide.f_inf
    assert np.abs(r.U - c.U).max() / scale <= 1e-12 and np.abs(r.F - c.F).max() / scale <= 1e-12


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.integers(-10, 10), min_size=2, max_size=6, unique=True),
    st.floats(1e-6, 1e6),
    seeds,
)
def test_fit_rate_ignores_error_scale(dxs, c, seed):
    dxs = sorted((2.0**k for k in dxs), reverse=True)
    errs = np.random.default_rng(seed).uniform(0.01, 1, len(dxs))
    a = fit_rate(dxs, errs)
    b = fit_rate(dxs, c * errs)
    assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-9)
