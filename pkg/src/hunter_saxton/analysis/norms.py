"""Error norms against exact solutions and exact norms of piecewise-linear differences."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import RangeError
from ..state import GridSpec, GridState, evaluate

__all__ = ["ErrorReport", "error_norms", "pl_norms", "projection_errors"]


@dataclass(frozen=True)
class ErrorReport:
    t: float
    err_u_inf: float
    err_u_l2: float
    err_F_l1: float
    err_F_l2: float
    points_per_cell: int
    err_F_inf: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def pl_norms(xs: np.ndarray, d: np.ndarray) -> tuple[float, float, float]:
    """Exact (sup, L1, L2) norms of the continuous piecewise-linear function
    with values ``d`` at breakpoints ``xs`` (zero outside is not assumed:
    only ``[xs[0], xs[-1]]`` is integrated)."""
    h = np.diff(xs)
    a, b = d[:-1], d[1:]
    sup = float(np.abs(d).max())
    l2sq = float(np.sum(h * (a * a + a * b + b * b) / 3))
    same = a * b >= 0
    aa, ab = np.abs(a), np.abs(b)
    tot = aa + ab
    with np.errstate(invalid="ignore", divide="ignore"):
        cross = np.where(tot > 0, (a * a + b * b) / (2 * tot), 0.0)
    l1 = float(np.sum(h * np.where(same, tot / 2, cross)))
    return sup, l1, float(np.sqrt(max(l2sq, 0.0)))


def projection_errors(b, grid: GridSpec, samples_per_cell: int = 16) -> dict[str, float]:
    """Norms of (u - u_p, F - F_p) where (u_p, F_p) samples ``b`` on ``grid``.

    Both operands are piecewise linear, so the difference is piecewise linear
    on the merged breakpoint set and the integrals are exact.
    """
    from ..state import project

    p = project(b, grid)
    xs_b = b.grid.nodes if isinstance(b, GridState) else b.xs
    lo = min(xs_b[0], grid.x0)
    hi = max(xs_b[-1], grid.x_end)
    merged = np.union1d(np.union1d(xs_b, grid.nodes), [lo, hi])
    fine = np.linspace(0, 1, samples_per_cell + 1)[1:-1]
    extra = (grid.nodes[:-1, None] + grid.dx * fine[None, :]).ravel()
    pts = np.union1d(merged, extra)
    u1, F1 = evaluate(b, pts)
    u2, F2 = evaluate(p, pts)
    su, _, l2u = pl_norms(pts, u1 - u2)
    _, l1F, l2F = pl_norms(pts, F1 - F2)
    return {"u_inf": su, "u_l2": l2u, "F_l1": l1F, "F_l2": l2F}


def _simpson_weights(m: int) -> np.ndarray:
    w = np.ones(m + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return w / (3 * m)


def _norms_at(state: GridState, exact, t: float, panels: np.ndarray, m: int):
    lo, hi = panels[:-1], panels[1:]
    r = np.linspace(0.0, 1.0, m + 1)
    pts = lo[:, None] + (hi - lo)[:, None] * r[None, :]
    # evaluate one-sided limits at panel ends so jumps of the exact F sit on edges
    pts[:, 0] = np.nextafter(lo, hi)
    pts[:, -1] = np.nextafter(hi, lo)
    u_num, F_num = evaluate(state, pts)
    du = np.abs(u_num - exact.u(t, pts))
    dF = np.abs(F_num - exact.F(t, pts))
    w = _simpson_weights(m)[None, :] * (hi - lo)[:, None]
    # nodes and kinks themselves, not nudged, for the sup norm
    u_nodes, F_nodes = evaluate(state, panels)
    sup = max(float(du.max()), float(np.abs(u_nodes - exact.u(t, panels)).max()))
    sup_F = max(float(dF.max()), float(np.abs(F_nodes - exact.F(t, panels)).max()))
    return (
        sup,
        float(np.sqrt(np.sum(w * du * du))),
        float(np.sum(w * dF)),
        float(np.sqrt(np.sum(w * dF * dF))),
        sup_F,
    )


def error_norms(state: GridState, exact, t: float, points_per_cell: int = 64,
                rtol: float = 1e-3, max_doublings: int = 5) -> ErrorReport:
    """L-inf/L2 errors in u and L1/L2 errors in F of ``state`` against ``exact`` at ``t``.

    Panels are the grid cells split at the exact kinks; each panel gets a
    composite Simpson rule.  The rule is refined by doubling until every
    norm changes by less than ``rtol``.
    """
    if not exact.check_time(t):
        raise RangeError(f"t={t} outside the range {exact.t_range} of {exact.name}")
    kinks = np.asarray(exact.kinks(t), dtype=np.float64)
    g = state.grid
    lo = min(g.x0, kinks.min()) - g.dx
    hi = max(g.x_end, kinks.max()) + g.dx
    panels = np.union1d(np.union1d(g.nodes, kinks), [lo, hi])
    panels = panels[np.diff(panels, prepend=-np.inf) > 0]

    m = points_per_cell
    prev = _norms_at(state, exact, t, panels, m)
    for _ in range(max_doublings):
        cur = _norms_at(state, exact, t, panels, 2 * m)
        m *= 2
        close = all(abs(c - p) <= max(rtol * abs(c), 1e-14) for c, p in zip(cur, prev))
        prev = cur
        if close:
            break
    su, l2u, l1F, l2F, sF = prev
    return ErrorReport(float(t), su, l2u, l1F, l2F, points_per_cell=m, err_F_inf=sF)
