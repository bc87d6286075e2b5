"""Thermo-visco-plastic generalized standard material solver."""

from ._core import (
    ConvergenceError,
    DomainError,
    ParseError,
    Scenario,
    ValidationError,
    indicator,
    list_scenarios,
    timeseries_columns,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "ParseError",
    "Scenario",
    "ValidationError",
    "indicator",
    "list_scenarios",
    "timeseries_columns",
]
