"""Birkhoff and quantum normal forms for bouncing-ball orbits."""

import json

from ._bbnf import (
    NumericalError,
    ValidationError,
    classify,
    dirichlet_eigenvalues,
    forward_map,
    invert,
    poincare_trace,
    run_json,
    straightening,
    wave_trace_peaks,
)


def run(config: dict) -> dict:
    """Run a configuration (same schema as the CLI) and return its report."""
    return json.loads(run_json(json.dumps(config)))


__all__ = [
    "NumericalError",
    "ValidationError",
    "classify",
    "dirichlet_eigenvalues",
    "forward_map",
    "invert",
    "poincare_trace",
    "run",
    "run_json",
    "straightening",
    "wave_trace_peaks",
]
