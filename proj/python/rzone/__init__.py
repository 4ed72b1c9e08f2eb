"""Reserve zone design for wind-dominated power systems."""

from ._rzone import (
    Case,
    Error,
    ScenarioSet,
    enumerate_partitions,
    load_case,
    load_scenarios,
    requirements,
    sample_scenarios,
    solve_sequential,
    solve_stochastic,
    solve_zonal,
)

__all__ = [
    "Case",
    "Error",
    "ScenarioSet",
    "enumerate_partitions",
    "load_case",
    "load_scenarios",
    "requirements",
    "sample_scenarios",
    "solve_sequential",
    "solve_stochastic",
    "solve_zonal",
]
