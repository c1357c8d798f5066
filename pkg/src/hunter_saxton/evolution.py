"""Exact evolution along characteristics, resampling, and the time-stepping loop.

Between time steps a continuous piecewise-linear pair is advanced exactly:
each breakpoint ``x_j`` moves to ``x_j + U_j t + (F_j - F_inf/2) t^2 / 4``,
carrying ``U_j + (F_j - F_inf/2) t / 2`` and ``F_j``.  The result is then
sampled back onto the uniform grid.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BreakpointCollision,
    DtExceedsCfl,
    TauExceedsCfl,
    ZeroEnergyNeedsDt,
)
from .state import (
    BreakpointState,
    GridSpec,
    GridState,
    InitialData,
    _check_edges,
    evaluate,
    project,
    support_window,
)

__all__ = [
    "CflParams",
    "Trajectory",
    "cfl_bound",
    "cfl_dt",
    "evolve",
    "resample",
    "resample_closed_form",
    "step",
    "eval_at",
    "state_at_tau",
    "min_gap",
    "plan_times",
    "run",
    "kernel_discrepancy",
]

_REL = 1e-12


@dataclass(frozen=True)
class CflParams:
    alpha: float = 1.0
    dt_override: float | None = None

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.dt_override is not None and not self.dt_override > 0:
            raise ValueError(f"dt_override must be positive, got {self.dt_override}")


def cfl_bound(f_inf: float, dx: float, alpha: float = 1.0) -> float:
    """Largest admissible step ``alpha * sqrt(dx) / (2 sqrt(f_inf))``."""
    if f_inf <= 0:
        return math.inf
    return alpha / (2 * math.sqrt(f_inf)) * math.sqrt(dx)


def cfl_dt(f_inf: float, dx: float, p: CflParams = CflParams()) -> float:
    if not dx > 0:
        raise ValueError("dx must be positive")
    bound = cfl_bound(f_inf, dx, p.alpha)
    if p.dt_override is not None:
        if f_inf > 0 and p.dt_override > bound * (1 + _REL):
            raise DtExceedsCfl(f"dt={p.dt_override} exceeds the bound {bound} for dx={dx}")
        return float(p.dt_override)
    if f_inf == 0:
        raise ZeroEnergyNeedsDt("f_inf = 0 gives no step bound; pass an explicit dt")
    return bound


def evolve(s: GridState, tau: float) -> BreakpointState:
    """Advance every grid node of ``s`` along its characteristic for time ``tau``."""
    if tau < 0:
        raise TauExceedsCfl(f"tau must be nonnegative, got {tau}")
    if tau > cfl_bound(s.f_inf, s.grid.dx) * (1 + _REL):
        raise TauExceedsCfl(
            f"tau={tau} exceeds {cfl_bound(s.f_inf, s.grid.dx)}, characteristics may cross"
        )
    accel = s.F - 0.5 * s.f_inf
    xs = s.grid.nodes + s.U * tau + 0.25 * accel * tau * tau
    U = s.U + 0.5 * accel * tau
    if np.any(np.diff(xs) <= 0):
        j = int(np.argmin(np.diff(xs)))
        raise BreakpointCollision(f"breakpoints {j} and {j + 1} collided at tau={tau}")
    return BreakpointState(xs, U, s.F, s.f_inf, tau)


def resample(b: BreakpointState, grid: GridSpec) -> GridState:
    """Sample ``b`` at the nodes of ``grid`` with a single monotone sweep."""
    xs = b.xs.tolist()
    U = b.U.tolist()
    F = b.F.tolist()
    f_inf = b.f_inf
    first, last = xs[0], xs[-1]
    out_u, out_f = [], []
    j = 0
    for x in grid.nodes.tolist():
        if x < first:
            out_u.append(U[0])
            out_f.append(0.0)
        elif x >= last:
            out_u.append(U[-1])
            out_f.append(F[-1] if x == last else f_inf)
        else:
            while xs[j + 1] <= x:
                j += 1
            s = (x - xs[j]) / (xs[j + 1] - xs[j])
            out_u.append(U[j] + s * (U[j + 1] - U[j]))
            out_f.append(F[j] + s * (F[j + 1] - F[j]))
    F_new = np.array(out_f)
    _check_edges(F_new, f_inf)
    return GridState(grid, out_u, F_new, f_inf)


def resample_closed_form(s: GridState, tau: float, grid: GridSpec | None = None) -> GridState:
    """One step of the scheme by inverting the per-cell affine forward map.

    On cell ``[x_j, x_j + dx]`` the characteristic map is
    ``xi -> X_j + r (dx + dU tau + dF tau^2 / 4)`` with ``r = (xi - x_j)/dx``;
    a node ``x_i`` landing in cell ``j`` has ``r`` solved directly and the
    evolved values are affine in ``r``.
    """
    grid = s.grid if grid is None else grid
    h = float(tau)
    x = s.grid.nodes
    U, F, f = s.U, s.F, s.f_inf
    dU, dF = np.diff(U), np.diff(F)
    X = x + U * h + 0.25 * (F - 0.5 * f) * h * h
    width = s.grid.dx + dU * h + 0.25 * dF * h * h

    nodes = grid.nodes
    j = np.searchsorted(X, nodes, side="right") - 1
    jc = np.clip(j, 0, x.size - 2)
    r = (nodes - X[jc]) / width[jc]
    u_new = U[jc] + 0.5 * (F[jc] - 0.5 * f) * h + r * (dU[jc] + 0.5 * dF[jc] * h)
    F_new = F[jc] + r * dF[jc]

    u_left = U[0] + 0.5 * (F[0] - 0.5 * f) * h
    u_right = U[-1] + 0.5 * (F[-1] - 0.5 * f) * h
    left, right = j < 0, j >= x.size - 1
    u_new = np.where(left, u_left, np.where(right, u_right, u_new))
    F_new = np.where(left, 0.0, np.where(right & (nodes == X[-1]), F[-1], np.where(right, f, F_new)))
    _check_edges(F_new, f)
    return GridState(grid, u_new, F_new, f)


def step(s: GridState, dt: float) -> GridState:
    return resample(evolve(s, dt), s.grid)


def state_at_tau(s: GridState, tau: float) -> GridState:
    """Numerical solution a time ``tau`` after the grid state ``s``."""
    if tau == 0:
        return s
    return step(s, tau)


def eval_at(s: GridState, tau: float, x):
    """(u, F) at ``x`` a time ``tau`` into the step that starts from ``s``."""
    return evaluate(state_at_tau(s, tau), x)


def min_gap(b) -> float:
    xs = b.grid.nodes if isinstance(b, GridState) else b.xs
    return float(np.diff(xs).min())


def plan_times(T: float, dt_max: float, snapshots: Sequence[float] = ()) -> list[float]:
    """Step times from 0 to ``T`` that land exactly on every snapshot time.

    Each interval between consecutive snapshot times is split into the
    fewest equal steps not exceeding ``dt_max``.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    marks = sorted({0.0, float(T), *(float(t) for t in snapshots)})
    if marks[0] < 0 or marks[-1] > T:
        raise ValueError("snapshot times must lie in [0, T]")
    times = [0.0]
    for lo, hi in zip(marks[:-1], marks[1:]):
        length = hi - lo
        m = max(1, math.ceil(length / dt_max))
        if m > 1 and length / (m - 1) <= dt_max * (1 + _REL):
            m -= 1
        h = length / m
        times.extend(lo + k * h for k in range(1, m))
        times.append(hi)
    return times


@dataclass(frozen=True)
class Trajectory:
    data: InitialData
    dx: float
    cfl: CflParams
    T: float
    dt: float
    grid: GridSpec
    times: tuple[float, ...]
    states: tuple[GridState, ...]
    snapshot_times: tuple[float, ...] = field(default=())

    @property
    def f_inf(self) -> float:
        return self.data.f_inf

    @property
    def steps(self) -> np.ndarray:
        return np.diff(np.asarray(self.times))

    @property
    def max_step(self) -> float:
        return float(self.steps.max()) if len(self.times) > 1 else 0.0

    def index_of(self, t: float) -> int:
        """Index of the last stored time not after ``t``."""
        n = bisect.bisect_right(self.times, t) - 1
        if n < 0 or t > self.times[-1]:
            raise ValueError(f"time {t} outside the run [0, {self.times[-1]}]")
        return n

    def state_at(self, t: float) -> GridState:
        n = self.index_of(t)
        return state_at_tau(self.states[n], t - self.times[n])

    def snapshot(self, t: float) -> GridState:
        return self.state_at(t)

    @property
    def snapshots(self) -> dict[float, GridState]:
        return {t: self.state_at(t) for t in self.snapshot_times}


def _safe_window(data: InitialData, T: float, n_steps: int, dx: float) -> tuple[float, float]:
    # support loses at most one cell per projection on each side
    a, b = data.support
    f = data.f_inf
    cand = [0.0, T]
    if f > 0:
        for tc in (4 * data.u_left / f, -4 * data.u_right / f):
            if 0 < tc < T:
                cand.append(tc)
    lo = min(data.u_left * t - f * t * t / 8 for t in cand)
    hi = max(data.u_right * t + f * t * t / 8 for t in cand)
    pad = (n_steps + 2) * dx
    return a + lo - pad, b + hi + pad


def run(data: InitialData, dx: float, p: CflParams = CflParams(), T: float = 0.0,
        snapshots: Sequence[float] = (), window: tuple[float, float] | None = None) -> Trajectory:
    """Run the scheme from ``data`` to time ``T`` on a grid of spacing ``dx``.

    The grid always covers the energy support; ``window`` widens it further,
    e.g. to contain the support of a test function.
    """
    snaps = tuple(sorted({float(t) for t in snapshots}))
    if any(t < 0 or t > T for t in snaps):
        raise ValueError(f"snapshot times {snaps} must lie in [0, {T}]")
    dt_max = cfl_dt(data.f_inf, dx, p)
    times = plan_times(T, dt_max, snaps)
    dt = max(np.diff(times), default=dt_max)

    lo1, hi1 = support_window(data, T, dt, dx)
    lo2, hi2 = _safe_window(data, T, len(times) - 1, dx)
    lo, hi = min(lo1, lo2), max(hi1, hi2)
    if window is not None:
        lo, hi = min(lo, window[0]), max(hi, window[1])
    grid = GridSpec.covering(lo, hi, dx)

    state = project(data, grid)
    states = [state]
    for t0, t1 in zip(times[:-1], times[1:]):
        state = step(state, t1 - t0)
        states.append(state)
    return Trajectory(data, dx, p, float(T), float(dt), grid, tuple(times), tuple(states), snaps)


def kernel_discrepancy(traj: Trajectory) -> float:
    """Largest normalized gap between the sweep and closed-form kernels."""
    worst = 0.0
    for n, h in enumerate(traj.steps):
        s = traj.states[n]
        ref = traj.states[n + 1]
        alt = resample_closed_form(s, float(h))
        scale = 1 + float(np.abs(s.U).max()) + s.f_inf
        diff = max(float(np.abs(alt.U - ref.U).max()), float(np.abs(alt.F - ref.F).max()))
        worst = max(worst, diff / scale)
    return worst
