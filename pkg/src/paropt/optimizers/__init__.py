"""Bound-constrained quasi-Newton and conjugate-gradient methods."""

from .directions import LbfgsHistory, bfgs_update, cg_direction
from .driver import active_mask, optimize, projected_gradient
from .linesearch import LineSearchFailure, LineSearchResult, wolfe_line_search
from .options import (BFGS, CG, LBFGSB, MACHINE_EPS, METHODS, Convergence,
                      OptimOptions, OptimResult)

__all__ = [
    "BFGS",
    "CG",
    "LBFGSB",
    "MACHINE_EPS",
    "METHODS",
    "Convergence",
    "LbfgsHistory",
    "LineSearchFailure",
    "LineSearchResult",
    "OptimOptions",
    "OptimResult",
    "active_mask",
    "bfgs_update",
    "cg_direction",
    "optimize",
    "projected_gradient",
    "wolfe_line_search",
]
