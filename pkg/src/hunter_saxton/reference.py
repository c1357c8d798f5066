"""Closed-form conservative solutions used as oracles.

Three cases are provided:

* ``peakon``  -- a single decreasing ramp on [0, 1] that breaks at t = 2,
* ``cusp``    -- |x|^(2/3) data that breaks continuously for t in [0, 3],
* ``peakon1`` -- the symmetric ramp on [-1, 1] that breaks at t = 2 at x = 0.

All evaluators take a scalar time and a scalar or array position.  At a
breaking time where F jumps, F is evaluated as its left limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidCustomData
from .state import InitialData

__all__ = ["ExactSolution", "peakon_sec3", "cusp", "peakon_sec1", "make_initial", "exact_solution"]


@dataclass(frozen=True)
class ExactSolution:
    name: str
    u: Callable[[float, np.ndarray], np.ndarray]
    F: Callable[[float, np.ndarray], np.ndarray]
    F_x: Callable[[float, np.ndarray], np.ndarray]
    kinks: Callable[[float], list]
    f_inf: float
    t_range: tuple[float, float]
    initial: InitialData

    def check_time(self, t: float) -> bool:
        return self.t_range[0] <= t <= self.t_range[1]


def _asarray(x):
    return np.asarray(x, dtype=np.float64)


def _scalar_or_array(x, values):
    return float(values) if np.ndim(x) == 0 else values


# --------------------------------------------------------------------------
# peakon on [0, 1]


def _peakon_u(t, x):
    x = _asarray(x)
    xl, xr, w = t - t * t / 8, 1 + t * t / 8, 1 - t / 2
    if w == 0.0:
        return _scalar_or_array(x, np.full_like(x, 0.5))
    mid = -(x - xl) / w + 1 - t / 4
    out = np.where(x < xl, 1 - t / 4, np.where(x > xr, t / 4, mid))
    return _scalar_or_array(x, out)


def _peakon_F(t, x):
    x = _asarray(x)
    xl, xr, w = t - t * t / 8, 1 + t * t / 8, 1 - t / 2
    if w == 0.0:
        return _scalar_or_array(x, np.where(x <= xl, 0.0, 1.0))
    out = np.where(x < xl, 0.0, np.where(x > xr, 1.0, (x - xl) / (w * w)))
    return _scalar_or_array(x, out)


def _peakon_Fx(t, x):
    x = _asarray(x)
    xl, xr, w = t - t * t / 8, 1 + t * t / 8, 1 - t / 2
    dens = math.inf if w == 0.0 else 1 / (w * w)
    return _scalar_or_array(x, np.where((x >= xl) & (x <= xr), dens, 0.0))


def peakon_sec3() -> ExactSolution:
    init = InitialData(
        u0=lambda x: _peakon_u(0.0, x),
        F0=lambda x: _peakon_F(0.0, x),
        f_inf=1.0,
        support=(0.0, 1.0),
        u_left=1.0,
        u_right=0.0,
        min_slope=-1.0,
        sup_norm=1.0,
        tv=1.0,
        name="peakon",
        kinks=(0.0, 1.0),
    )
    return ExactSolution(
        name="peakon",
        u=_peakon_u,
        F=_peakon_F,
        F_x=_peakon_Fx,
        kinks=lambda t: [t - t * t / 8, 1 + t * t / 8],
        f_inf=1.0,
        t_range=(0.0, math.inf),
        initial=init,
    )


# --------------------------------------------------------------------------
# cusp


def _cusp_edges(t):
    return -1 + t - t * t / 3, 1 + t + t * t / 3


def _cusp_u(t, x):
    x = _asarray(x)
    lo, hi = _cusp_edges(t)
    c = np.cbrt(x + (t / 3) ** 3)
    mid = c * c - t * t / 9
    out = np.where(x < lo, 1 - 2 * t / 3, np.where(x > hi, 1 + 2 * t / 3, mid))
    return _scalar_or_array(x, out)


def _cusp_F(t, x):
    x = _asarray(x)
    lo, hi = _cusp_edges(t)
    c = np.cbrt(x + (t / 3) ** 3)
    mid = 4 / 3 * c + 4 / 3 * (1 - t / 3)
    out = np.where(x < lo, 0.0, np.where(x > hi, 8 / 3, mid))
    return _scalar_or_array(x, out)


def _cusp_Fx(t, x):
    x = _asarray(x)
    lo, hi = _cusp_edges(t)
    with np.errstate(divide="ignore"):
        c = np.cbrt(x + (t / 3) ** 3)
        mid = 4 / (9 * c * c)
    out = np.where((x >= lo) & (x <= hi), mid, 0.0)
    return _scalar_or_array(x, out)


def _cusp_kinks(t):
    lo, hi = _cusp_edges(t)
    pts = [lo, hi]
    tip = -((t / 3) ** 3)
    if lo < tip < hi:
        pts.insert(1, tip)
    return pts


def cusp() -> ExactSolution:
    init = InitialData(
        u0=lambda x: _cusp_u(0.0, x),
        F0=lambda x: _cusp_F(0.0, x),
        f_inf=8 / 3,
        support=(-1.0, 1.0),
        u_left=1.0,
        u_right=1.0,
        min_slope=-math.inf,
        sup_norm=1.0,
        tv=2.0,
        name="cusp",
        kinks=(-1.0, 0.0, 1.0),
    )
    return ExactSolution("cusp", _cusp_u, _cusp_F, _cusp_Fx, _cusp_kinks, 8 / 3,
                         (0.0, math.inf), init)


# --------------------------------------------------------------------------
# symmetric peakon on [-1, 1]


def _p1_u(t, x):
    x = _asarray(x)
    w = 1 - t / 2
    h = w * w
    if w == 0.0:
        return _scalar_or_array(x, np.zeros_like(x))
    out = np.where(x < -h, w, np.where(x > h, -w, -x / w))
    return _scalar_or_array(x, out)


def _p1_F(t, x):
    x = _asarray(x)
    w = 1 - t / 2
    h = w * w
    if w == 0.0:
        return _scalar_or_array(x, np.where(x <= 0.0, 0.0, 2.0))
    out = np.where(x < -h, 0.0, np.where(x > h, 2.0, (x + h) / h))
    return _scalar_or_array(x, out)


def _p1_Fx(t, x):
    x = _asarray(x)
    h = (1 - t / 2) ** 2
    dens = math.inf if h == 0.0 else 1 / h
    return _scalar_or_array(x, np.where(np.abs(x) <= h, dens, 0.0))


def peakon_sec1() -> ExactSolution:
    init = InitialData(
        u0=lambda x: _p1_u(0.0, x),
        F0=lambda x: _p1_F(0.0, x),
        f_inf=2.0,
        support=(-1.0, 1.0),
        u_left=1.0,
        u_right=-1.0,
        min_slope=-1.0,
        sup_norm=1.0,
        tv=2.0,
        name="peakon1",
        kinks=(-1.0, 1.0),
    )
    return ExactSolution(
        name="peakon1",
        u=_p1_u,
        F=_p1_F,
        F_x=_p1_Fx,
        kinks=lambda t: [-((1 - t / 2) ** 2), (1 - t / 2) ** 2],
        f_inf=2.0,
        t_range=(0.0, 4.0),
        initial=init,
    )


_EXACT = {"peakon": peakon_sec3, "cusp": cusp, "peakon1": peakon_sec1}


def exact_solution(name: str) -> ExactSolution:
    try:
        return _EXACT[name]()
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; choose from {sorted(_EXACT)}") from None


def _custom_initial(points: Sequence[Sequence[float]], f_inf: float | None) -> InitialData:
    try:
        arr = np.asarray(points, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidCustomData(f"breakpoints must be numeric (x, u, F) triples: {exc}") from None
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 2:
        raise InvalidCustomData("need at least two (x, u, F) breakpoints")
    xs, us, Fs = arr.T
    if f_inf is None:
        f_inf = float(Fs[-1])
    tol = 1e-12 * max(1.0, f_inf)
    dx, du, dF = np.diff(xs), np.diff(us), np.diff(Fs)
    if not np.all(np.isfinite(arr)):
        raise InvalidCustomData("breakpoints must be finite")
    if np.any(dx <= 0):
        raise InvalidCustomData("breakpoint positions must be strictly increasing")
    if np.any(dF < -tol):
        raise InvalidCustomData("F must be nondecreasing")
    if abs(Fs[0]) > tol or abs(Fs[-1] - f_inf) > tol:
        raise InvalidCustomData("F must rise from 0 at the first breakpoint to f_inf at the last")
    if np.any(du**2 > dF * dx + tol * (du**2 + np.abs(dF) * dx)):
        raise InvalidCustomData("cell energy inequality (du)^2 <= dF*dx violated")
    # F keeps its right-edge value f_inf beyond the last breakpoint
    return InitialData(
        u0=lambda x: np.interp(x, xs, us),
        F0=lambda x: np.interp(x, xs, Fs),
        f_inf=float(f_inf),
        support=(float(xs[0]), float(xs[-1])),
        u_left=float(us[0]),
        u_right=float(us[-1]),
        min_slope=float(np.min(du / dx)),
        sup_norm=float(np.max(np.abs(us))),
        tv=float(np.abs(du).sum()),
        name="custom",
        kinks=tuple(float(v) for v in xs),
    )


def make_initial(name: str = "custom", custom: Sequence[Sequence[float]] | None = None,
                 f_inf: float | None = None) -> InitialData:
    """Initial data by name, or piecewise-linear data from (x, u, F) breakpoints."""
    if custom is not None:
        return _custom_initial(custom, f_inf)
    return exact_solution(name).initial
