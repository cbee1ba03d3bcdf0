"""Tribracket region colorings of knots and surface-links."""
from .errors import BudgetExceeded, DomainError, StructureError, SurfcolError, UnsupportedError
from .tribracket import FiniteGroup, Tribracket, ValidationReport, dehn_tribracket, enumerate_tribrackets
from .systems import (
    EqVar,
    EquationSystem,
    SolveStats,
    TriEq,
    brute_force_count,
    count_colorings,
    enumerate_colorings,
    invertibility_witness,
    normalize,
    parse_equations,
    reverse_orientation,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DomainError",
    "EqVar",
    "EquationSystem",
    "FiniteGroup",
    "SolveStats",
    "StructureError",
    "SurfcolError",
    "TriEq",
    "Tribracket",
    "UnsupportedError",
    "ValidationReport",
    "brute_force_count",
    "count_colorings",
    "dehn_tribracket",
    "enumerate_colorings",
    "enumerate_tribrackets",
    "invertibility_witness",
    "normalize",
    "parse_equations",
    "reverse_orientation",
]
