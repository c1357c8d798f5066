"""Snapshot files (CSV or JSON plus a JSON sidecar) and the trajectory manifest.

Floats are written with ``repr``, the shortest string that round-trips a
binary64 value, so reading a file back reproduces the state bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .state import GridSpec, GridState

__all__ = ["snapshot_name", "write_state", "read_state", "write_manifest", "write_table"]


def snapshot_name(t: float) -> str:
    return f"snapshot_t{t:.10g}"


def _num(v) -> str:
    return repr(float(v))


def write_state(state: GridState, t: float, path: Path, fmt: str = "csv") -> Path:
    """Write ``state`` to ``path`` (suffix is set from ``fmt``); returns the data path."""
    path = Path(path)
    g = state.grid
    meta = {"x0": g.x0, "dx": g.dx, "n": g.n, "f_inf": state.f_inf, "t": float(t)}
    if fmt == "csv":
        data_path = path.with_suffix(".csv")
        with open(data_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "u", "F"])
            for x, u, F in zip(g.nodes, state.U, state.F):
                w.writerow([_num(x), _num(u), _num(F)])
        path.with_suffix(".json").write_text(json.dumps(meta, indent=2) + "\n")
    elif fmt == "json":
        data_path = path.with_suffix(".json")
        doc = dict(meta, x=g.nodes.tolist(), u=state.U.tolist(), F=state.F.tolist())
        data_path.write_text(json.dumps(doc) + "\n")
    else:
        raise ValueError(f"unknown snapshot format {fmt!r}")
    return data_path


def read_state(path: Path) -> tuple[GridState, float]:
    """Read a snapshot written by :func:`write_state`.

    A ``.csv`` path needs its ``.json`` sidecar next to it.  Raises
    ``ValueError`` on malformed files.
    """
    path = Path(path)
    if path.suffix == ".csv":
        meta = json.loads(path.with_suffix(".json").read_text())
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or [c.strip() for c in rows[0]] != ["x", "u", "F"]:
            raise ValueError(f"{path}: expected header x,u,F")
        body = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=np.float64)
        if body.ndim != 2 or body.shape[1] != 3:
            raise ValueError(f"{path}: every row needs three columns")
        xs, U, F = body.T
    else:
        meta = json.loads(path.read_text())
        xs = np.asarray(meta["x"], dtype=np.float64)
        U = np.asarray(meta["u"], dtype=np.float64)
        F = np.asarray(meta["F"], dtype=np.float64)
    grid = GridSpec(float(meta["x0"]), float(meta["dx"]), int(meta["n"]))
    if xs.size != grid.n:
        raise ValueError(f"{path}: {xs.size} rows but sidecar says n={grid.n}")
    if not np.allclose(xs, grid.nodes, rtol=0, atol=1e-9 * max(1.0, abs(grid.x_end))):
        raise ValueError(f"{path}: x column does not match the grid x0 + j*dx")
    return GridState(grid, U, F, float(meta["f_inf"])), float(meta.get("t", math.nan))


def write_manifest(traj, path: Path, files: dict[float, str] | None = None) -> Path:
    g = traj.grid
    doc = {
        "dt": traj.dt,
        "steps": len(traj.times) - 1,
        "times": list(traj.times),
        "f_inf": traj.f_inf,
        "grid": {"x0": g.x0, "dx": g.dx, "n": g.n},
        "alpha": traj.cfl.alpha,
        "T": traj.T,
        "snapshots": {f"{t:.10g}": name for t, name in (files or {}).items()},
    }
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return path


def write_table(rows: list[dict], path: Path) -> Path:
    """CSV with the keys of the first row as header; floats via ``repr``."""
    path = Path(path)
    if not rows:
        path.write_text("")
        return path
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: _num(v) if isinstance(v, (float, np.floating)) else v for k, v in r.items()})
    return path
