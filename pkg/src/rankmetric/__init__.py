"""rankmetric - MRD rank-metric codes, σ-polynomial families and list-decoding adversaries."""

from .errors import (
    ConstructionError,
    EnumerationGuardError,
    MRDViolation,
    NormConditionError,
    ParameterError,
    RankMetricError,
)
from .fields import FieldTower, parse_field_spec

__all__ = [
    "ConstructionError",
    "EnumerationGuardError",
    "FieldTower",
    "MRDViolation",
    "NormConditionError",
    "ParameterError",
    "RankMetricError",
    "__version__",
    "parse_field_spec",
]

__version__ = "0.1.0"
