"""Python access to the nonlocal energy laboratory."""

import json

from ._core import (
    ConfigError,
    GridFunction,
    GridSpec,
    GuardViolation,
    NumericalFailure,
    commands,
    defect,
    fractional_gradient,
    gagliardo,
    i_delta,
    knp_constant,
    polarize,
    riesz_constant,
    schwarz_rearrange,
)
from . import _core


def counterexample_scan(p=2.0, epsilon=0.01, deltas=(1e-3, 1e-2), refinement=8, with_grid=True):
    """Study report of the one-dimensional counterexample as a dict."""
    return json.loads(_core._counterexample_scan(p, epsilon, list(deltas), refinement, with_grid))


def inequality_suite(trials=20, seed=1):
    return json.loads(_core._inequality_suite(trials, seed))


def run(command, out_dir, seed=1, **parameters):
    """Runs a CLI command in-process; returns the written paths."""
    return _core._run(command, json.dumps(parameters), str(out_dir), seed)


def sample(spec, f):
    """Grid function with values f(x) at cell centers (f takes a 2-tuple)."""
    return GridFunction(spec, [float(f(spec.center(i))) for i in range(spec.size)])


__all__ = [
    "ConfigError",
    "GridFunction",
    "GridSpec",
    "GuardViolation",
    "NumericalFailure",
    "commands",
    "counterexample_scan",
    "defect",
    "fractional_gradient",
    "gagliardo",
    "i_delta",
    "inequality_suite",
    "knp_constant",
    "polarize",
    "riesz_constant",
    "run",
    "sample",
    "schwarz_rearrange",
]
