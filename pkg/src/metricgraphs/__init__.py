"""Exact enumeration, sampling, and constructive verification for complete
edge-colored graphs whose colors are distances in {1, ..., r}."""

from .core import (
    ColorSetGraph,
    EditSet,
    MetricColoring,
    Params,
    delta,
    find_violating_triangle,
    is_delta_close,
    is_metric,
    is_metric_set,
    is_metric_triangle,
    is_violating_triple,
    m_of,
)
from .errors import CapacityError, DomainError, ToolkitError, UnsupportedInstanceError

__all__ = [
    "CapacityError",
    "ColorSetGraph",
    "DomainError",
    "EditSet",
    "MetricColoring",
    "Params",
    "ToolkitError",
    "UnsupportedInstanceError",
    "delta",
    "find_violating_triangle",
    "is_delta_close",
    "is_metric",
    "is_metric_set",
    "is_metric_triangle",
    "is_violating_triple",
    "m_of",
]

__version__ = "0.1.0"
