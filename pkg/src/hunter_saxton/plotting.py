"""Figures written to files: snapshot profiles and log-log error plots."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_snapshots", "plot_convergence"]


def plot_snapshots(traj, path: Path, exact=None, fine: int = 2001) -> Path:
    """u and F at every snapshot time, with the exact solution dashed if given."""
    times = traj.snapshot_times or (traj.times[-1],)
    fig, axes = plt.subplots(2, len(times), figsize=(3.2 * len(times), 5), squeeze=False,
                             sharex="col")
    g = traj.grid
    xs = np.linspace(g.x0, g.x_end, fine)
    for k, t in enumerate(times):
        s = traj.state_at(t)
        ax_u, ax_F = axes[0, k], axes[1, k]
        ax_u.plot(g.nodes, s.U, "-", lw=1.2, label="scheme")
        ax_F.plot(g.nodes, s.F, "-", lw=1.2)
        if exact is not None and exact.check_time(t):
            ax_u.plot(xs, exact.u(t, xs), "k--", lw=0.8, label="exact")
            ax_F.plot(xs, exact.F(t, xs), "k--", lw=0.8)
        ax_u.set_title(f"t = {t:g}")
        ax_F.set_xlabel("x")
    axes[0, 0].set_ylabel("u")
    axes[1, 0].set_ylabel("F")
    axes[0, 0].legend(frameon=False, fontsize=8)
    fig.suptitle(f"dx = {traj.dx:g}, dt = {traj.dt:.6g}", fontsize=10)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_convergence(report, path: Path, norms=("err_u_inf", "err_F_l1")) -> Path:
    """Errors against dx on log-log axes with a sqrt(dx) reference line."""
    fig, axes = plt.subplots(1, len(norms), figsize=(4.2 * len(norms), 3.6), squeeze=False)
    for ax, norm in zip(axes[0], norms):
        for t in report.times:
            dxs, errs = report.series(t, norm)
            pos = [(d, e) for d, e in zip(dxs, errs) if e > 0]
            if not pos:
                continue
            d, e = map(np.asarray, zip(*pos))
            slope = report.slopes.get((t, norm))
            lab = f"t = {t:g}" + (f" (slope {slope:.2f})" if slope is not None else "")
            ax.loglog(d, e, "o-", ms=4, label=lab)
        dxs = np.asarray(report.dxs)
        if dxs.size:
            ref = np.sqrt(dxs / dxs[0])
            top = max((max(report.series(t, norm)[1]) for t in report.times), default=1.0)
            ax.loglog(dxs, top * ref, "k:", lw=0.8, label="sqrt(dx)")
        ax.set_xlabel("dx")
        ax.set_ylabel(norm)
        ax.legend(frameon=False, fontsize=8)
    fig.suptitle(report.problem, fontsize=10)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
