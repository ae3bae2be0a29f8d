"""Interbank contagion models."""

from ._contagion import (
    CalibrationSummary,
    Distribution,
    NonConvergence,
    calibrate,
    classify_fixed_points,
    critical_coupling,
    hysteresis_bounds,
    hysteresis_sweep,
    iterate_map,
    leverage_min,
    phase_diagram,
    simulate,
    solve_fixed_point,
    stability_scan,
)

__all__ = [
    "CalibrationSummary",
    "Distribution",
    "NonConvergence",
    "calibrate",
    "classify_fixed_points",
    "critical_coupling",
    "hysteresis_bounds",
    "hysteresis_sweep",
    "iterate_map",
    "leverage_min",
    "phase_diagram",
    "simulate",
    "solve_fixed_point",
    "stability_scan",
]
