"""Bounds on potential-outcome distributions in a binary-selection triangular system."""
from ._trisys import (
    ConfigError,
    DgpSpec,
    InputError,
    NumericalError,
    ObservedLaw,
    Regime,
    Target,
    build_observed_law,
    diagnose,
    dte_bounds,
    format_cell,
    joint_bounds,
    marginal_bounds,
    parse_regime,
    tables,
    truth,
)

__all__ = [
    "ConfigError",
    "DgpSpec",
    "InputError",
    "NumericalError",
    "ObservedLaw",
    "Regime",
    "Target",
    "build_observed_law",
    "diagnose",
    "dte_bounds",
    "format_cell",
    "joint_bounds",
    "marginal_bounds",
    "parse_regime",
    "tables",
    "truth",
]
