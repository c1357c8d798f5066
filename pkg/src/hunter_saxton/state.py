"""Discrete state space: uniform-grid and breakpoint piecewise-linear pairs (u, F).

A state stores node values of the velocity ``u`` and of the cumulative energy
``F`` together with the total energy ``f_inf``.  Between nodes both functions
are linear.  Outside the stored window ``u`` is extended by its edge values,
``F`` by 0 on the left and ``f_inf`` on the right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NonMonotoneInput, WindowTooSmall

__all__ = [
    "GridSpec",
    "GridState",
    "BreakpointState",
    "InitialData",
    "Violation",
    "ValidationReport",
    "tau_f",
    "project",
    "evaluate",
    "validate",
    "total_variation",
    "support_window",
]


def tau_f(f_inf: float) -> float:
    """Round-off tolerance for monotonicity and saturation of F."""
    return 1e-12 * max(1.0, f_inf)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with ``n`` nodes at ``x0 + j*dx``."""

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not self.dx > 0:
            raise ValueError(f"grid spacing must be positive, got {self.dx}")
        if self.n < 2:
            raise ValueError(f"grid needs at least 2 nodes, got {self.n}")

    @classmethod
    def covering(cls, lo: float, hi: float, dx: float) -> "GridSpec":
        """Smallest grid aligned to ``dx * Z`` whose window contains ``[lo, hi]``."""
        j0 = math.floor(lo / dx)
        j1 = math.ceil(hi / dx)
        return cls(j0 * dx, dx, max(j1 - j0 + 1, 2))

    @property
    def nodes(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def x_end(self) -> float:
        return self.x0 + (self.n - 1) * self.dx


@dataclass(frozen=True)
class GridState:
    grid: GridSpec
    U: np.ndarray
    F: np.ndarray
    f_inf: float

    def __post_init__(self):
        object.__setattr__(self, "U", _frozen(self.U))
        object.__setattr__(self, "F", _frozen(self.F))
        object.__setattr__(self, "f_inf", float(self.f_inf))
        if self.U.shape != (self.grid.n,) or self.F.shape != (self.grid.n,):
            raise ValueError("U and F must have one value per grid node")

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def xs(self) -> np.ndarray:
        return self.grid.nodes

    def as_breakpoints(self) -> "BreakpointState":
        return BreakpointState(self.grid.nodes, self.U, self.F, self.f_inf, 0.0)


@dataclass(frozen=True)
class BreakpointState:
    """Piecewise-linear pair on a non-uniform, strictly increasing breakpoint set."""

    xs: np.ndarray
    U: np.ndarray
    F: np.ndarray
    f_inf: float
    tau: float = 0.0

    def __post_init__(self):
        for name in ("xs", "U", "F"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, "f_inf", float(self.f_inf))
        if not (self.xs.shape == self.U.shape == self.F.shape) or self.xs.ndim != 1:
            raise ValueError("xs, U and F must be 1-d arrays of equal length")
        if self.xs.size < 2:
            raise ValueError("need at least 2 breakpoints")


@dataclass(frozen=True)
class InitialData:
    """Initial pair (u0, F0).

    ``u0`` and ``F0`` must accept numpy arrays.  ``support`` is an interval
    outside which F0 is constant (0 to the left, ``f_inf`` to the right).
    """

    u0: Callable[[np.ndarray], np.ndarray]
    F0: Callable[[np.ndarray], np.ndarray]
    f_inf: float
    support: tuple[float, float]
    u_left: float
    u_right: float
    min_slope: float | None = None
    sup_norm: float | None = None
    tv: float | None = None
    name: str = "custom"
    kinks: tuple[float, ...] = field(default=())

    @property
    def breaking_time(self) -> float:
        """Lower bound -2/min(u0') for the first wave-breaking time."""
        if self.min_slope is None or self.min_slope >= 0:
            return math.inf
        return -2.0 / self.min_slope


@dataclass(frozen=True)
class Violation:
    check: str
    index: int
    magnitude: float

    def __str__(self):
        return f"{self.check} at index {self.index} (magnitude {self.magnitude:.3e})"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def checks_failed(self) -> set[str]:
        return {v.check for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"check": v.check, "index": v.index, "magnitude": v.magnitude}
                for v in self.violations
            ],
        }


def _breakpoints(state) -> np.ndarray:
    return state.grid.nodes if isinstance(state, GridState) else state.xs


def evaluate(state, x):
    """Evaluate the piecewise-linear interpolant (u, F) of ``state`` at ``x``.

    Works for scalars and arrays.  Applies the far-field extension outside
    the window.  Exactly at a breakpoint the stored node values are returned.
    """
    xs = _breakpoints(state)
    U, F = state.U, state.F
    xq = np.asarray(x, dtype=np.float64)
    j = np.searchsorted(xs, xq, side="right") - 1
    inner = (j >= 0) & (j < xs.size - 1)
    jc = np.clip(j, 0, xs.size - 2)
    s = (xq - xs[jc]) / (xs[jc + 1] - xs[jc])
    u = U[jc] + s * (U[jc + 1] - U[jc])
    f = F[jc] + s * (F[jc + 1] - F[jc])
    left = j < 0
    right = j >= xs.size - 1
    at_last = right & (xq == xs[-1])
    u = np.where(left, U[0], np.where(right, U[-1], u))
    f = np.where(left, 0.0, np.where(at_last, F[-1], np.where(right, state.f_inf, f)))
    if xq.ndim == 0:
        return float(u), float(f)
    return u, f


def _check_edges(F: np.ndarray, f_inf: float) -> None:
    tol = tau_f(f_inf)
    steps = np.diff(F)
    if steps.size and steps.min() < -tol:
        j = int(np.argmin(steps)) + 1
        raise NonMonotoneInput(f"F decreases by {-steps.min():.3e} at node {j}")
    if abs(F[0]) > tol or abs(F[-1] - f_inf) > tol:
        raise WindowTooSmall(
            f"grid window does not cover the energy support: "
            f"F[0]={F[0]:.6g}, F[-1]={F[-1]:.6g}, f_inf={f_inf:.6g}"
        )


def project(data, grid: GridSpec) -> GridState:
    """Sample ``data`` at the grid nodes (linear interpolation in between).

    ``data`` may be :class:`InitialData` (evaluated directly), a
    :class:`BreakpointState` or a :class:`GridState` (interpolated).
    """
    nodes = grid.nodes
    if isinstance(data, InitialData):
        U = np.asarray(data.u0(nodes), dtype=np.float64)
        F = np.asarray(data.F0(nodes), dtype=np.float64)
    else:
        U, F = evaluate(data, nodes)
    _check_edges(F, data.f_inf)
    return GridState(grid, U, F, data.f_inf)


def validate(state) -> ValidationReport:
    """Check every membership condition of the discrete state space."""
    out: list[Violation] = []
    xs = _breakpoints(state)
    U, F, f_inf = state.U, state.F, state.f_inf
    tol = tau_f(f_inf)

    if not (math.isfinite(f_inf) and f_inf >= 0):
        out.append(Violation("f_inf_nonnegative", -1, float(f_inf)))
    bad = ~(np.isfinite(U) & np.isfinite(F))
    for j in np.flatnonzero(bad):
        out.append(Violation("finite", int(j), math.nan))

    widths = np.diff(xs)
    for j in np.flatnonzero(~(widths > 0)):
        out.append(Violation("breakpoints_increasing", int(j) + 1, float(-widths[j])))

    dF = np.diff(F)
    for j in np.flatnonzero(dF < -tol):
        out.append(Violation("F_monotone", int(j) + 1, float(-dF[j])))
    for j in np.flatnonzero(F < -tol):
        out.append(Violation("F_nonnegative", int(j), float(-F[j])))
    for j in np.flatnonzero(F > f_inf + tol):
        out.append(Violation("F_bounded", int(j), float(F[j] - f_inf)))

    dU = np.diff(U)
    excess = dU**2 - dF * widths
    # F values are only resolved to tau_F, so dF * w may be off by tau_F * w
    scale = (dU**2 + (np.abs(dF) + 1) * np.abs(widths)
             + np.abs(dU) * (np.abs(U[:-1]) + np.abs(U[1:])))
    for j in np.flatnonzero(excess > tol * scale):
        out.append(Violation("cell_energy", int(j), float(excess[j])))

    if abs(F[0]) > tol:
        out.append(Violation("window_left", 0, float(abs(F[0]))))
    if abs(F[-1] - f_inf) > tol:
        out.append(Violation("window_right", len(F) - 1, float(abs(F[-1] - f_inf))))
    return ValidationReport(tuple(out))


def total_variation(state) -> float:
    return float(np.abs(np.diff(state.U)).sum())


def support_window(data: InitialData, T: float, dt: float, dx: float) -> tuple[float, float]:
    """Interval containing the numerical energy support on ``[0, T]``.

    Uses the curves a(t) = a + u_l t - (t/8 + 4 dt) F t - 2 dx and
    b(t) = b + u_r t + (t/8 + 4 dt) F t + 2 dx.
    """
    a, b = data.support
    f = data.f_inf

    def lower(t):
        return a + data.u_left * t - (t / 8 + 4 * dt) * f * t - 2 * dx

    def upper(t):
        return b + data.u_right * t + (t / 8 + 4 * dt) * f * t + 2 * dx

    cand = [0.0, float(T)]
    if f > 0:
        # stationary points of the two quadratics
        for tc in ((data.u_left - 4 * dt * f) * 4 / f, -(data.u_right + 4 * dt * f) * 4 / f):
            if 0 < tc < T:
                cand.append(tc)
    return min(lower(t) for t in cand), max(upper(t) for t in cand)


def breakpoint_state(xs: Sequence[float], U: Sequence[float], F: Sequence[float],
                     f_inf: float | None = None) -> BreakpointState:
    """Convenience constructor; ``f_inf`` defaults to the last F value."""
    F = np.asarray(F, dtype=np.float64)
    return BreakpointState(xs, U, F, float(F[-1]) if f_inf is None else f_inf)
