"""Weak-formulation residuals with smooth compactly supported test functions.

For a pair (u, F) with energy measure dmu = F_x dx the two residuals are

    R_u = int int [phi_t u + phi_x u^2/2 + phi (F/2 - F_inf/4)] dx dt + int phi(0,x) u(0,x) dx
    R_F = int int [phi_t + u phi_x] dmu dt + int phi(0,x) dmu(0)

Both vanish for conservative solutions.  Space integrals use Gauss-Legendre
rules on panels (grid cells cut into ``x_sub`` equal pieces, split at any
kinks of the integrand); time integrals use Gauss-Legendre rules on
``t_sub`` equal substeps of every time step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import SupportNotCovered
from ..state import GridState, evaluate

__all__ = ["Bump", "weak_residual", "exact_weak_residual"]


def _psi(s):
    s = np.asarray(s, dtype=np.float64)
    inside = np.abs(s) < 1
    q = np.where(inside, 1 - s * s, 1.0)
    return np.where(inside, np.exp(1 - 1 / q), 0.0), inside, q


def _psi_d(s):
    # returns psi, psi', psi''
    p, inside, q = _psi(s)
    g = np.where(inside, -2 * s / q**2, 0.0)
    gp = np.where(inside, -2 / q**2 - 8 * s * s / q**3, 0.0)
    return p, p * g, p * (g * g + gp)


@dataclass(frozen=True)
class Bump:
    """phi(t, x) = psi(t / t_half) psi((x - x_center) / x_half) with
    psi(s) = exp(1 - 1/(1 - s^2)) on |s| < 1.

    Supported on [0, t_half) x (x_center - x_half, x_center + x_half) for t >= 0.
    """

    t_half: float = 3.0
    x_center: float = 1.5
    x_half: float = 2.5

    @property
    def t_max(self) -> float:
        return self.t_half

    @property
    def x_range(self) -> tuple[float, float]:
        return self.x_center - self.x_half, self.x_center + self.x_half

    def _parts(self, t, x):
        a, ap, app = _psi_d(np.asarray(t) / self.t_half)
        b, bp, bpp = _psi_d((np.asarray(x) - self.x_center) / self.x_half)
        return a, ap / self.t_half, app / self.t_half**2, b, bp / self.x_half, bpp / self.x_half**2

    def phi(self, t, x):
        a, _, _, b, _, _ = self._parts(t, x)
        return a * b

    def phi_t(self, t, x):
        _, at, _, b, _, _ = self._parts(t, x)
        return at * b

    def phi_x(self, t, x):
        a, _, _, _, bx, _ = self._parts(t, x)
        return a * bx

    def phi_tx(self, t, x):
        _, at, _, _, bx, _ = self._parts(t, x)
        return at * bx

    def phi_xx(self, t, x):
        a, _, _, _, _, bxx = self._parts(t, x)
        return a * bxx


class _Zero:
    t_max = 0.0
    x_range = (0.0, 0.0)

    def __getattr__(self, name):
        return lambda t, x: np.zeros(np.broadcast(np.asarray(t), np.asarray(x)).shape)


ZERO = _Zero()

Field = Callable[[float], tuple[np.ndarray, Callable, Callable, Callable]]


def _gauss01(n: int):
    z, w = np.polynomial.legendre.leggauss(n)
    return (z + 1) / 2, w / 2


def _space_integrals(phi, t, panels, u_fn, F_fn, Fx_fn, f_inf, gx):
    z, w = _gauss01(gx)
    lo, hi = panels[:-1], panels[1:]
    h = hi - lo
    pts = lo[:, None] + h[:, None] * z[None, :]
    W = h[:, None] * w[None, :]
    u = u_fn(pts)
    F = F_fn(pts)
    Fx = Fx_fn(pts)
    pt, px, p0 = phi.phi_t(t, pts), phi.phi_x(t, pts), phi.phi(t, pts)
    iu = np.sum(W * (pt * u + px * u * u / 2 + p0 * (F / 2 - f_inf / 4)))
    iF = np.sum(W * (pt + u * px) * Fx)
    init_u = np.sum(W * p0 * u)
    init_F = np.sum(W * p0 * Fx)
    return float(iu), float(iF), float(init_u), float(init_F)


def _residual(phi, step_times, field: Field, f_inf, gx, gt, t_sub):
    """Core quadrature; ``field(t)`` returns panels and evaluators (u, F, F_x)."""
    zt, wt = _gauss01(gt)
    res_u = res_F = 0.0
    for t0, t1 in zip(step_times[:-1], step_times[1:]):
        if t0 >= phi.t_max:
            break
        edges = np.linspace(t0, t1, t_sub + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            for z, wk in zip(zt, wt):
                t = a + (b - a) * z
                panels, u_fn, F_fn, Fx_fn = field(t)
                iu, iF, _, _ = _space_integrals(phi, t, panels, u_fn, F_fn, Fx_fn, f_inf, gx)
                res_u += (b - a) * wk * iu
                res_F += (b - a) * wk * iF
    panels, u_fn, F_fn, Fx_fn = field(0.0)
    _, _, init_u, init_F = _space_integrals(phi, 0.0, panels, u_fn, F_fn, Fx_fn, f_inf, gx)
    return res_u + init_u, res_F + init_F


def _cells_in(nodes: np.ndarray, lo: float, hi: float) -> np.ndarray:
    i0 = max(int(np.searchsorted(nodes, lo, side="right")) - 1, 0)
    i1 = min(int(np.searchsorted(nodes, hi, side="left")), nodes.size - 1)
    return nodes[i0:i1 + 1]


def _slope(state: GridState, x):
    g = state.grid
    j = np.clip(np.floor((x - g.x0) / g.dx).astype(int), 0, g.n - 2)
    inside = (x >= g.x0) & (x <= g.x_end)
    return np.where(inside, (state.F[j + 1] - state.F[j]) / g.dx, 0.0)


def _subdivide(panels: np.ndarray, k: int) -> np.ndarray:
    if k <= 1:
        return panels
    r = np.arange(k) / k
    inner = panels[:-1, None] + np.diff(panels)[:, None] * r[None, :]
    return np.append(inner.ravel(), panels[-1])


def _check_cover(phi, T, grid):
    if phi is ZERO:
        return
    lo, hi = phi.x_range
    if phi.t_max > T or lo < grid.x0 or hi > grid.x_end:
        raise SupportNotCovered(
            f"test function support [0,{phi.t_max}]x[{lo},{hi}] is not inside the run "
            f"[0,{T}]x[{grid.x0},{grid.x_end}]"
        )


def weak_residual(traj, phi=None, gauss_x: int = 4, gauss_t: int = 4,
                  t_sub: int = 2, x_sub: int = 4) -> tuple[float, float]:
    """Residuals (R_u, R_F) of the numerical solution of ``traj``.

    The solution inside a step is the projected exact evolution of the
    state at the start of that step; the initial terms use the projected
    initial state.
    """
    phi = Bump() if phi is None else phi
    if phi is ZERO:
        return 0.0, 0.0
    _check_cover(phi, traj.T, traj.grid)
    nodes = _subdivide(_cells_in(traj.grid.nodes, *phi.x_range), x_sub)

    def field(t):
        state = traj.state_at(t)
        return (nodes,
                lambda x: evaluate(state, x)[0],
                lambda x: evaluate(state, x)[1],
                lambda x: _slope(state, x))

    return _residual(phi, list(traj.times), field, traj.f_inf, gauss_x, gauss_t, t_sub)


def exact_weak_residual(exact, phi, times, grid, gauss_x: int = 4, gauss_t: int = 4,
                        t_sub: int = 2, x_sub: int = 4) -> tuple[float, float]:
    """Residuals of a closed-form solution under the same space-time rule.

    Panels are the grid cells split at the exact kinks at each quadrature time.
    """
    phi = Bump() if phi is None else phi
    if phi is ZERO:
        return 0.0, 0.0
    _check_cover(phi, times[-1], grid)
    base = _subdivide(_cells_in(grid.nodes, *phi.x_range), x_sub)
    lo, hi = base[0], base[-1]

    def field(t):
        k = [v for v in exact.kinks(t) if lo < v < hi]
        panels = np.union1d(base, k)
        panels = panels[np.diff(panels, prepend=-math.inf) > 0]
        return (panels,
                lambda x: exact.u(t, x),
                lambda x: exact.F(t, x),
                lambda x: exact.F_x(t, x))

    return _residual(phi, list(times), field, exact.f_inf, gauss_x, gauss_t, t_sub)
