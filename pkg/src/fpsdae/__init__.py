"""Formal power series solutions of implicit ODE systems at degenerate points."""

from .errors import (
    DegenerateIndicialError,
    FpsDaeError,
    HypothesisError,
    InfeasibleRootError,
    OverdeterminedError,
    ParseError,
    UsageError,
    ValidationError,
)
from .expansion import JetPoint, compute_T, extract_Rbar, gamma_row, partial_T
from .expr import Problem, parse, to_source
from .field import Field
from .indicial import indicial_data
from .separant import assemble_S, check_conditions
from .solver import SolveOptions, SolutionFamily, solve, solve_regular, verify_family

__all__ = [
    "DegenerateIndicialError",
    "Field",
    "FpsDaeError",
    "HypothesisError",
    "InfeasibleRootError",
    "JetPoint",
    "OverdeterminedError",
    "ParseError",
    "Problem",
    "SolveOptions",
    "SolutionFamily",
    "UsageError",
    "ValidationError",
    "assemble_S",
    "check_conditions",
    "compute_T",
    "extract_Rbar",
    "gamma_row",
    "indicial_data",
    "parse",
    "partial_T",
    "solve",
    "solve_regular",
    "to_source",
    "verify_family",
]
