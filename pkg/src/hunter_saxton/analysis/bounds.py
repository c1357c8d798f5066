"""A priori bounds of the numerical solution and checkers for each of them."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..state import InitialData, support_window, total_variation
from .norms import pl_norms

__all__ = ["BoundConstants", "CheckResult", "BoundsReport", "bound_constants", "check_bounds"]


@dataclass(frozen=True)
class BoundConstants:
    u0_sup: float
    tv0: float
    f_inf: float
    T: float
    dx: float
    dt: float
    holder_C: float
    discrete_holder_C: float
    f_modulus_C: float
    f_modulus_D: float
    sup_bound: float
    tv_bound: float

    def discrete_holder(self, t: float) -> float:
        """Temporal constant at the later of the two compared times."""
        f = self.f_inf
        return (math.sqrt(f) * math.sqrt(self.u0_sup + f * t / 4 + 2 * math.sqrt(f) * math.sqrt(self.dx))
                + f * math.sqrt(t) / 4)

    def sup_at(self, t: float) -> float:
        return self.u0_sup + self.f_inf * t / 4

    def tv_at(self, t: float) -> float:
        return self.tv0 + self.f_inf * t / 2

    def to_dict(self) -> dict:
        return asdict(self)


def _sup_and_tv(data: InitialData) -> tuple[float, float]:
    if data.sup_norm is not None and data.tv is not None:
        return data.sup_norm, data.tv
    # fall back to dense sampling over the support
    a, b = data.support
    xs = np.linspace(a, b, 200001)
    u = np.asarray(data.u0(xs))
    sup = max(float(np.abs(u).max()), abs(data.u_left), abs(data.u_right))
    tv = float(np.abs(np.diff(u)).sum())
    return (data.sup_norm if data.sup_norm is not None else sup,
            data.tv if data.tv is not None else tv)


def bound_constants(data: InitialData, T: float, dx: float, dt: float) -> BoundConstants:
    u0, tv0 = _sup_and_tv(data)
    f = data.f_inf
    sf = math.sqrt(f)
    m = u0 + f * T / 4
    disc = sf * math.sqrt(m + 2 * sf * math.sqrt(dx)) + f * math.sqrt(T) / 4
    holder = 4 * max(4 * sf * math.sqrt(m), 2 * sf, disc)
    C = 6 * (u0 + f * (17 * dt + T) / 4) * f
    D = 8 * (u0 + f * (dt + T) / 4) * f
    return BoundConstants(
        u0_sup=u0, tv0=tv0, f_inf=f, T=T, dx=dx, dt=dt,
        holder_C=holder, discrete_holder_C=disc, f_modulus_C=C, f_modulus_D=D,
        sup_bound=m, tv_bound=tv0 + f * T / 2,
    )


@dataclass
class CheckResult:
    passed: bool
    worst_margin: float
    checked: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class BoundsReport:
    constants: BoundConstants
    slack: float
    results: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results.values())

    def to_dict(self) -> dict:
        return {
            "constants": self.constants.to_dict(),
            "slack": self.slack,
            "ok": self.ok,
            "checks": {k: v.to_dict() for k, v in self.results.items()},
        }


def _offsets(n: int) -> list[int]:
    out, k = [], 1
    while k < n:
        out.append(k)
        k *= 2
    return out


def _record(report: BoundsReport, name: str, excess: np.ndarray) -> None:
    """``excess`` holds lhs - rhs per checked instance."""
    excess = np.asarray(excess, dtype=np.float64).ravel()
    worst = float(excess.max()) if excess.size else -math.inf
    prev = report.results.get(name)
    if prev is not None:
        worst = max(worst, prev.worst_margin)
        count = prev.checked + excess.size
    else:
        count = excess.size
    report.results[name] = CheckResult(worst <= report.slack, worst, count)


def _energy_support(state) -> tuple[float, float] | None:
    dF = np.diff(state.F)
    idx = np.flatnonzero(dF > 0)
    if idx.size == 0:
        return None
    x = state.grid.nodes
    return float(x[idx[0]]), float(x[idx[-1] + 1])


def check_bounds(traj, consts: BoundConstants | None = None, max_pairs: int = 100_000,
                 seed: int = 0) -> BoundsReport:
    """Verify every a priori estimate on the stored states of ``traj``.

    Each inequality is tested as lhs <= rhs + slack with the additive slack
    ``1e-8 * (1 + F_inf + |u0|_inf)``.
    """
    if consts is None:
        consts = bound_constants(traj.data, traj.T, traj.dx, traj.max_step or traj.dt)
    slack = 1e-8 * (1 + consts.f_inf + consts.u0_sup)
    rep = BoundsReport(consts, slack)
    f, dx, dt = consts.f_inf, traj.dx, consts.dt
    times = np.asarray(traj.times)
    U = np.stack([s.U for s in traj.states])
    F = np.stack([s.F for s in traj.states])
    x = traj.grid.nodes
    nt, nx = U.shape

    _record(rep, "sup", np.abs(U).max(axis=1) - (consts.u0_sup + f * times / 4))
    _record(rep, "initial_sup", [np.abs(U[0]).max() - consts.u0_sup])
    tv = np.array([total_variation(s) for s in traj.states])
    _record(rep, "total_variation", tv - (consts.tv0 + f * times / 2))
    _record(rep, "F_range", np.maximum(-F, F - f).max(axis=1))
    _record(rep, "F_monotone", -np.diff(F, axis=1).min(axis=1))
    dU, dF = np.diff(U, axis=1), np.diff(F, axis=1)
    _record(rep, "cell_energy", (dU**2 - dF * dx).max(axis=1))

    sup_ex = []
    for t, s in zip(times, traj.states):
        a, b = support_window(traj.data, float(t), dt, dx)
        supp = _energy_support(s)
        if supp is not None:
            sup_ex.append(max(a - supp[0], supp[1] - b))
    _record(rep, "support_window", sup_ex)

    sf = math.sqrt(f)
    for k in _offsets(nx):
        lhs = np.abs(U[:, k:] - U[:, :-k])
        _record(rep, "spatial_holder", (lhs - sf * math.sqrt(k * dx)).max(axis=1))

    for k in _offsets(nt):
        later = times[k:]
        lhs = np.abs(U[k:] - U[:-k]).max(axis=1)
        C = np.array([consts.discrete_holder(t) for t in later])
        _record(rep, "discrete_temporal_holder", lhs - C * np.sqrt(later - times[:-k]))

    rng = np.random.default_rng(seed)
    npts = nt * nx
    if npts * (npts - 1) // 2 <= max_pairs:
        p, q = np.triu_indices(npts, k=1)
    else:
        p = rng.integers(0, npts, max_pairs)
        q = rng.integers(0, npts, max_pairs)
    ti, xi = np.divmod(p, nx)
    tj, xj = np.divmod(q, nx)
    lhs = np.abs(U[ti, xi] - U[tj, xj])
    rhs = consts.holder_C * np.sqrt(np.abs(times[ti] - times[tj]) + np.abs(x[xi] - x[xj]))
    _record(rep, "holder", lhs - rhs)

    if nt * (nt - 1) // 2 <= max_pairs:
        pi, qi = np.triu_indices(nt, k=1)
    else:
        pi, qi = rng.integers(0, nt, max_pairs), rng.integers(0, nt, max_pairs)
    ex = []
    for m, n in zip(pi.tolist(), qi.tolist()):
        _, l1, _ = pl_norms(x, F[m] - F[n])
        rhs = consts.f_modulus_C * abs(times[m] - times[n]) + consts.f_modulus_D * dt + 12 * f * dx
        ex.append(l1 - rhs)
    _record(rep, "F_time_modulus", ex)
    return rep
