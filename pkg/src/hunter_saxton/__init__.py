"""Projection-plus-characteristics scheme for the conservative Hunter-Saxton equation."""

from .errors import HSError
from .evolution import CflParams, Trajectory, cfl_dt, evolve, resample, run, step
from .reference import exact_solution, make_initial
from .state import (
    BreakpointState,
    GridSpec,
    GridState,
    InitialData,
    evaluate,
    project,
    support_window,
    total_variation,
    validate,
)

__all__ = [
    "HSError",
    "CflParams",
    "Trajectory",
    "cfl_dt",
    "evolve",
    "resample",
    "run",
    "step",
    "exact_solution",
    "make_initial",
    "BreakpointState",
    "GridSpec",
    "GridState",
    "InitialData",
    "evaluate",
    "project",
    "support_window",
    "total_variation",
    "validate",
]
