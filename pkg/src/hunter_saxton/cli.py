"""Command-line front end.

Subcommands: ``run``, ``converge``, ``validate``, ``residual``, ``check-bounds``.
Exit codes: 0 success, 2 a check or validation failed, 1 bad configuration
or input.  With ``--json`` every stdout line is a JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .analysis.bounds import check_bounds
from .analysis.convergence import convergence_study, fit_line
from .analysis.weak import Bump, exact_weak_residual, weak_residual
from .config import RunConfig, load_config, parse_number
from .errors import ConfigError, DegenerateFit, HSError
from .evolution import CflParams, kernel_discrepancy, run
from .io import read_state, snapshot_name, write_manifest, write_state, write_table
from .reference import exact_solution
from .state import validate

__all__ = ["main", "build_parser"]

KERNEL_TOL = 1e-12


class Emitter:
    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def __call__(self, event: str, text: str = "", **payload):
        if self.as_json:
            doc = _finite({"event": event, **payload})
            print(json.dumps(doc, default=_jsonable, allow_nan=False), file=self.stream)
        else:
            stream = sys.stderr if event == "error" else self.stream
            print(text or f"{event}: {payload}", file=stream)


def _finite(v):
    # NaN and inf are not valid JSON; emit null instead
    if isinstance(v, dict):
        return {k: _finite(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_finite(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _jsonable(v):
    if hasattr(v, "tolist"):
        return v.tolist()
    if hasattr(v, "to_dict"):
        return v.to_dict()
    return str(v)


def _numbers(values: Sequence[str] | None) -> list[float] | None:
    if not values:
        return None
    out = []
    for v in values:
        out.extend(parse_number(p) for p in v.split(",") if p.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--dx", nargs="+", help="grid spacing; accepts 1/4, 2^-3 or a list")
    common.add_argument("--alpha", type=float, help="CFL fraction in (0, 1]")
    common.add_argument("--dt", type=float, dest="dt_override", help="explicit time step")
    common.add_argument("--T", type=float, help="final time")
    common.add_argument("--snapshots", nargs="+", help="output times, e.g. 0 2 4 or 0,1.93,4")
    common.add_argument("--problem", help="peakon, cusp or peakon1")
    common.add_argument("--out", help="output directory (default $HS_OUT_DIR or ./hs_out)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--json", action="store_true", help="JSON lines on stdout")
    common.add_argument("--seed", type=int, help="seed for sampled checks")
    common.add_argument("--jobs", type=int, help="parallel runs in convergence studies")
    common.add_argument("--no-plots", action="store_true", help="skip figure files")

    p = argparse.ArgumentParser(prog="hunter-saxton", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run the scheme and write snapshots")
    sub.add_parser("converge", parents=[common], help="convergence study over a dx list")
    v = sub.add_parser("validate", parents=[common], help="validate snapshot files")
    v.add_argument("state", nargs="+", help="snapshot .csv (with .json sidecar) or .json")
    sub.add_parser("residual", parents=[common], help="weak-form residuals over a dx list")
    sub.add_parser("check-bounds", parents=[common], help="verify the a priori bounds")
    return p


def _config(args) -> tuple[RunConfig, list[float] | None]:
    dxs = _numbers(args.dx)
    snaps = _numbers(args.snapshots)
    over = {
        "alpha": args.alpha, "dt_override": args.dt_override, "T": args.T,
        "snapshots": snaps, "problem": args.problem, "out": args.out,
        "format": args.format, "seed": args.seed, "jobs": args.jobs,
        "plots": False if args.no_plots else None,
    }
    if dxs and len(dxs) == 1:
        over["dx"] = dxs[0]
    return load_config(args.config, over), dxs


def _single_dx(cfg: RunConfig, dxs) -> float:
    if dxs and len(dxs) > 1:
        raise ConfigError("this command takes a single dx", "/dx")
    return cfg.dx


def _dx_list(cfg: RunConfig, dxs) -> list[float]:
    vals = dxs or list(cfg.dxs)
    if not vals:
        raise ConfigError("dx list is empty", "/dxs")
    if any(b >= a for a, b in zip(vals, vals[1:])):
        raise ConfigError("dx list must be strictly decreasing", "/dxs")
    return vals


def _exact(cfg: RunConfig):
    return exact_solution(cfg.named) if cfg.named else None


def _trajectory(cfg: RunConfig, dx: float, window=None):
    return run(cfg.initial(), dx, CflParams(cfg.alpha, cfg.dt_override), cfg.T,
               cfg.snapshots, window=window)


def cmd_run(cfg: RunConfig, dxs, emit: Emitter) -> int:
    traj = _trajectory(cfg, _single_dx(cfg, dxs))
    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for t, s in traj.snapshots.items():
        files[t] = write_state(s, t, out / snapshot_name(t), cfg.format).name
    write_manifest(traj, out / "trajectory.json", files)
    failed = False

    if "validate" in cfg.checks:
        bad = [(t, r) for t, r in ((t, validate(s)) for t, s in zip(traj.times, traj.states))
               if not r.ok]
        bad += [(t, r) for t, r in ((t, validate(s)) for t, s in traj.snapshots.items()) if not r.ok]
        for t, r in bad:
            emit("violation", f"t={t:g}: " + "; ".join(map(str, r.violations)), t=t, report=r.to_dict())
        failed |= bool(bad)
    if "kernel" in cfg.checks:
        d = kernel_discrepancy(traj)
        ok = d <= KERNEL_TOL
        emit("kernel", f"kernel discrepancy {d:.3e} ({'ok' if ok else 'FAIL'})", discrepancy=d, ok=ok)
        failed |= not ok
    if "bounds" in cfg.checks:
        rep = check_bounds(traj, seed=cfg.seed)
        (out / "bounds.json").write_text(json.dumps(rep.to_dict(), indent=2) + "\n")
        failed |= not rep.ok
        emit("bounds", f"a priori bounds: {'ok' if rep.ok else 'FAIL'}", ok=rep.ok)
    if cfg.plots:
        from .plotting import plot_snapshots

        plot_snapshots(traj, out / "snapshots.png", _exact(cfg))
    emit("run", f"{len(traj.times) - 1} steps, dx={traj.dx:g}, dt={traj.dt:.12g}, "
         f"{len(files)} snapshots written to {out}",
         steps=len(traj.times) - 1, dx=traj.dx, dt=traj.dt, out=str(out), files=list(files.values()))
    return 2 if failed else 0


def cmd_converge(cfg: RunConfig, dxs, emit: Emitter) -> int:
    if not cfg.named:
        raise ConfigError("convergence needs a named problem with an exact solution", "/problem")
    vals = _dx_list(cfg, dxs)
    rep = convergence_study(cfg.named, vals, cfg.alpha, cfg.T, cfg.snapshots, cfg.jobs)
    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    rows = rep.table()
    write_table(rows, out / "convergence.csv")
    for r in rows:
        emit("row", f"t={r['t']:g} dx={r['dx']:g} dt={r['dt']:.6g} err_u_inf={r['err_u_inf']:.6e} "
             f"err_F_l1={r['err_F_l1']:.6e}", **r)
    if rep.flagged:
        emit("slope", "single dx: no rate fitted", flagged=True)
    for (t, norm), s in sorted(rep.slopes.items()):
        emit("slope", f"t={t:g} {norm}: slope {s:.4f} (residual {rep.residuals[(t, norm)]:.3e})",
             t=t, norm=norm, slope=s, residual=rep.residuals[(t, norm)])
    if cfg.plots:
        from .plotting import plot_convergence

        plot_convergence(rep, out / "convergence.png")
    return 0


def cmd_validate(paths: Sequence[str], emit: Emitter) -> int:
    worst = 0
    for p in paths:
        try:
            state, t = read_state(Path(p))
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read {p}: {exc}") from None
        r = validate(state)
        text = f"{p}: ok" if r.ok else f"{p}: " + "; ".join(map(str, r.violations))
        emit("validate", text, path=p, t=t, **r.to_dict())
        if not r.ok:
            worst = 2
    return worst


def cmd_residual(cfg: RunConfig, dxs, emit: Emitter) -> int:
    vals = _dx_list(cfg, dxs)
    phi = Bump(**cfg.bump)
    # the run only has to reach the end of the test function's time support
    cfg = replace(cfg, T=phi.t_max, snapshots=())
    exact = _exact(cfg)
    rows = []
    for dx in vals:
        traj = _trajectory(cfg, dx, window=phi.x_range)
        ru, rF = weak_residual(traj, phi)
        row = {"dx": dx, "dt": traj.dt, "res_u": ru, "res_F": rF}
        if exact is not None:
            eu, eF = exact_weak_residual(exact, phi, traj.times, traj.grid)
            row.update(exact_res_u=eu, exact_res_F=eF)
        rows.append(row)
        emit("residual", f"dx={dx:g} res_u={ru:.6e} res_F={rF:.6e}", **row)
    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    write_table(rows, out / "residual.csv")
    for key in ("res_u", "res_F"):
        try:
            s, resid = fit_line(vals, [abs(r[key]) for r in rows])
        except DegenerateFit as exc:
            emit("slope", f"{key}: no rate ({exc})", norm=key, slope=None)
            continue
        emit("slope", f"{key}: slope {s:.4f}", norm=key, slope=s, residual=resid)
    return 0


def cmd_check_bounds(cfg: RunConfig, dxs, emit: Emitter) -> int:
    traj = _trajectory(cfg, _single_dx(cfg, dxs))
    rep = check_bounds(traj, seed=cfg.seed)
    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    (out / "bounds.json").write_text(json.dumps(rep.to_dict(), indent=2) + "\n")
    for name, r in rep.results.items():
        margin = r.worst_margin if math.isfinite(r.worst_margin) else None
        emit("bound", f"{name:26s} {'ok  ' if r.passed else 'FAIL'} worst lhs-rhs {r.worst_margin:.3e} "
             f"over {r.checked}", check=name, passed=r.passed, worst_margin=margin, checked=r.checked)
    return 0 if rep.ok else 2


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    emit = Emitter(args.json)
    try:
        cfg, dxs = _config(args)
        if args.command == "run":
            return cmd_run(cfg, dxs, emit)
        if args.command == "converge":
            return cmd_converge(cfg, dxs, emit)
        if args.command == "validate":
            return cmd_validate(args.state, emit)
        if args.command == "residual":
            return cmd_residual(cfg, dxs, emit)
        return cmd_check_bounds(cfg, dxs, emit)
    except ConfigError as exc:
        emit("error", f"config error: {exc}", pointer=exc.pointer, message=str(exc))
        return 1
    except (HSError, KeyError, ValueError) as exc:
        emit("error", f"error: {exc}", message=str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
