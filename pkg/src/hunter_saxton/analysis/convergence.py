"""Convergence studies: runs over a list of grid sizes and log-log rate fits."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DegenerateFit
from ..evolution import CflParams, run
from ..reference import exact_solution
from .norms import ErrorReport, error_norms

__all__ = ["NORMS", "ConvergenceRow", "ConvergenceReport", "fit_rate", "fit_line",
           "pairwise_rates", "convergence_study"]

NORMS = ("err_u_inf", "err_u_l2", "err_F_l1", "err_F_l2")


def fit_line(dxs: Sequence[float], errs: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of log(err) against log(dx), and the residual norm."""
    dxs = np.asarray(dxs, dtype=np.float64)
    errs = np.asarray(errs, dtype=np.float64)
    if dxs.size < 2:
        raise DegenerateFit("need at least two points to fit a rate")
    if np.any(errs <= 0) or np.any(dxs <= 0):
        raise DegenerateFit("all errors and grid sizes must be positive")
    X, Y = np.log(dxs), np.log(errs)
    A = np.column_stack([X, np.ones_like(X)])
    coef, *_ = np.linalg.lstsq(A, Y, rcond=None)
    resid = float(np.linalg.norm(A @ coef - Y))
    return float(coef[0]), resid


def fit_rate(dxs: Sequence[float], errs: Sequence[float]) -> float:
    return fit_line(dxs, errs)[0]


def pairwise_rates(dxs: Sequence[float], errs: Sequence[float]) -> list[float]:
    """Rates between consecutive grid sizes; NaN for the first entry."""
    out = [math.nan]
    for k in range(1, len(dxs)):
        e0, e1 = errs[k - 1], errs[k]
        if e0 > 0 and e1 > 0:
            out.append(math.log(e1 / e0) / math.log(dxs[k] / dxs[k - 1]))
        else:
            out.append(math.nan)
    return out


@dataclass(frozen=True)
class ConvergenceRow:
    dx: float
    dt: float
    report: ErrorReport


@dataclass
class ConvergenceReport:
    problem: str
    rows: list[ConvergenceRow]
    slopes: dict[tuple[float, str], float] = field(default_factory=dict)
    residuals: dict[tuple[float, str], float] = field(default_factory=dict)
    flagged: bool = False

    @property
    def times(self) -> list[float]:
        return sorted({r.report.t for r in self.rows})

    @property
    def dxs(self) -> list[float]:
        return sorted({r.dx for r in self.rows}, reverse=True)

    def series(self, t: float, norm: str) -> tuple[list[float], list[float]]:
        rows = sorted((r for r in self.rows if r.report.t == t), key=lambda r: -r.dx)
        return [r.dx for r in rows], [getattr(r.report, norm) for r in rows]

    def slope(self, t: float, norm: str) -> float:
        return self.slopes[(t, norm)]

    def table(self) -> list[dict]:
        """Rows for ``convergence.csv``, ordered by time then decreasing dx."""
        out = []
        for t in self.times:
            dxs, eu = self.series(t, "err_u_inf")
            _, eF = self.series(t, "err_F_l1")
            ru, rF = pairwise_rates(dxs, eu), pairwise_rates(dxs, eF)
            rows = sorted((r for r in self.rows if r.report.t == t), key=lambda r: -r.dx)
            for k, r in enumerate(rows):
                rep = r.report
                out.append({
                    "dx": r.dx, "dt": r.dt, "t": t,
                    "err_u_inf": rep.err_u_inf, "err_u_l2": rep.err_u_l2,
                    "err_F_l1": rep.err_F_l1, "err_F_l2": rep.err_F_l2,
                    "rate_pairwise_u_inf": ru[k], "rate_pairwise_F_l1": rF[k],
                })
        return out


def _one_run(problem: str, dx: float, alpha: float, T: float, times: tuple[float, ...]):
    ex = exact_solution(problem)
    traj = run(ex.initial, dx, CflParams(alpha), T, times)
    reports = [error_norms(traj.state_at(t), ex, t) for t in times]
    return dx, traj.dt, reports


def convergence_study(problem: str, dxs: Sequence[float], alpha: float = 1.0,
                      T: float = 4.0, times: Sequence[float] = (4.0,),
                      jobs: int = 1) -> ConvergenceReport:
    """Run ``problem`` for every grid size and measure errors at ``times``."""
    dxs = [float(d) for d in dxs]
    if not dxs:
        raise ValueError("dx list is empty")
    if any(b >= a for a, b in zip(dxs, dxs[1:])):
        raise ValueError("dx list must be strictly decreasing")
    times = tuple(float(t) for t in times)
    args = [(problem, dx, alpha, T, times) for dx in dxs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one_run, *zip(*args)))
    else:
        results = [_one_run(*a) for a in args]
    results.sort(key=lambda r: -r[0])

    rows = [ConvergenceRow(dx, dt, rep) for dx, dt, reps in results for rep in reps]
    report = ConvergenceReport(problem, rows)
    if len(dxs) < 2:
        report.flagged = True
        return report
    for t in times:
        for norm in NORMS:
            xs, es = report.series(t, norm)
            try:
                slope, resid = fit_line(xs, es)
            except DegenerateFit:
                continue
            report.slopes[(t, norm)] = slope
            report.residuals[(t, norm)] = resid
    return report
