"""Exact and approximate solvers for (cyclic) d-distance b-matching."""

from .core import (
    UNBOUNDED,
    Edge,
    FeasibilityReport,
    Instance,
    Matching,
    Side,
    Violation,
    ViolationKind,
    check_feasible,
    distance_ok,
    is_perfect,
    validate_instance,
    weight,
    window,
)
from .errors import (
    DbMatchError,
    InstanceError,
    PreconditionError,
)

__all__ = [
    "UNBOUNDED", "Edge", "FeasibilityReport", "Instance", "Matching", "Side", "Violation",
    "ViolationKind", "check_feasible", "distance_ok", "is_perfect", "validate_instance", "weight",
    "window", "DbMatchError", "InstanceError", "PreconditionError",
]
