"""Random valid piecewise-linear states shared by property and acceptance tests."""

from __future__ import annotations

import math

import numpy as np

from hunter_saxton.state import BreakpointState, GridSpec


def random_breakpoint_state(rng: np.random.Generator, n_max: int = 30) -> BreakpointState:
    """Valid state on uneven breakpoints; some cells are saturated, some carry no energy."""
    n = int(rng.integers(2, n_max + 1))
    widths = rng.uniform(0.01, 1.0, n - 1)
    xs = rng.uniform(-2, 2) + np.concatenate([[0.0], np.cumsum(widths)])
    widths = np.diff(xs)
    f_inf = float(rng.choice([1.0, rng.uniform(0.05, 6.0)]))
    share = rng.dirichlet(np.ones(n - 1))
    share[rng.random(n - 1) < 0.2] = 0.0
    if share.sum() == 0:
        share[0] = 1.0
    F = np.concatenate([[0.0], np.cumsum(share / share.sum() * f_inf)])
    F[-1] = f_inf
    F = np.minimum(F, f_inf)
    dF = np.diff(F)
    theta = rng.uniform(-1, 1, n - 1)
    sat = rng.random(n - 1) < 0.3
    theta[sat] = np.sign(theta[sat])
    # shrink by a few ulps so that (dU)^2 <= dF * w survives rounding
    dU = theta * np.sqrt(dF * widths) * (1 - 1e-14)
    U = rng.uniform(-2, 2) + np.concatenate([[0.0], np.cumsum(dU)])
    return BreakpointState(xs, U, F, f_inf)


def covering_grid(rng: np.random.Generator, b: BreakpointState, dx: float | None = None) -> GridSpec:
    """Grid with a random offset whose window strictly contains ``b``'s breakpoints."""
    dx = float(rng.uniform(0.02, 0.6)) if dx is None else dx
    x0 = b.xs[0] - dx * (1 + rng.random())
    n = math.ceil((b.xs[-1] + dx - x0) / dx) + 1
    return GridSpec(float(x0), dx, n)
