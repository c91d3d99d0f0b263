"""Exact calculus for oscillator-valued layer operators on a triangular grid.

The package computes vacuum expectation values of layer operators of a
three-dimensional vertex model as exact multivariate Laurent polynomials and
verifies the algebraic identities they satisfy (exchange relations, the
tetrahedron equation, and a correspondence with Schur polynomials) against
independent symmetric-function oracles.
"""

from .network import (
    Convention,
    InvalidLabels,
    count_configurations,
    enumerate_configurations,
    inhomogeneous_spec,
    resolve_convention,
    scalar_spec,
    vev,
)
from .poly import (
    DivisionByZero,
    InexactDivision,
    LaurentPoly,
    NegativeExponentSubstitution,
    Var,
    exact_divide,
    parse_var_name,
)
from .verify import CheckReport, run_battery

__all__ = [
    "CheckReport",
    "Convention",
    "DivisionByZero",
    "InexactDivision",
    "InvalidLabels",
    "LaurentPoly",
    "NegativeExponentSubstitution",
    "Var",
    "count_configurations",
    "enumerate_configurations",
    "exact_divide",
    "inhomogeneous_spec",
    "parse_var_name",
    "resolve_convention",
    "run_battery",
    "scalar_spec",
    "vev",
]

__version__ = "0.1.0"
