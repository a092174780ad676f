"""Numerics for variable-exponent function spaces on the Heisenberg group.

Group arithmetic and gauge geometry, midpoint-grid fields with Haar
quadrature, variable exponents and Luxemburg norms, maximal and singular
convolution operators, moment-vanishing atoms, and a verification CLI that
turns the inequalities of the theory into named, reproducible checks.
"""

__version__ = "0.1.0"

from .group import (
    Ball,
    GroupContext,
    MultiIndex,
    Point,
    ball_contains,
    dilate,
    group_inv,
    group_mul,
    identity,
    invariant_derivative,
    koranyi_norm,
    monomial,
    multiindex_degrees,
)
from .grid import Field, Grid, GridSpec, build_grid, integrate, sample
from .exponents import ExponentFn, conjugate, dpdot, log_holder_estimate, make_exponent, sobolev_exponent
from .luxemburg import NormResult, dual_norm_estimate, holder_pairing, luxemburg_norm, modular, script_A

__all__ = [
    "__version__",
    "GroupContext", "Point", "MultiIndex", "Ball",
    "group_mul", "group_inv", "dilate", "koranyi_norm", "identity",
    "ball_contains", "multiindex_degrees", "monomial", "invariant_derivative",
    "GridSpec", "Grid", "Field", "build_grid", "sample", "integrate",
    "ExponentFn", "make_exponent", "conjugate", "sobolev_exponent", "dpdot",
    "log_holder_estimate",
    "NormResult", "modular", "luxemburg_norm", "holder_pairing",
    "dual_norm_estimate", "script_A",
]
