"""Fractional iterates of real functions.

Super-logarithm / tetration machinery for real-order iterates of the
exponential, Lambert-W closed forms, fixed-point half-iterate series, and
numerical functional-root solvers (chain interpolation, additive relaxation,
genetic coefficient evolution).
"""

from . import superlog
from .approx import (
    Candidate,
    LossReport,
    SolverConfig,
    TargetFn,
    additive_correct,
    compose_iterates,
    genetic_solve,
    ica_solve,
    riemann_loss,
)
from .closed_forms import (
    FixedPointSeries,
    PiecewiseSolution,
    assumed_form,
    assumed_form_general,
    fixed_point_half_series,
    piecewise_solution,
)
from .errors import (
    AbelGateError,
    BranchDomainError,
    ConditioningWarning,
    ConvergenceError,
    DegenerateChainError,
    DivergenceError,
    DomainError,
    FracIterError,
    SingularMatrixError,
)
from .numerics import find_root, lambert_w, linear_solve
from .series import PowerSeries, series_compose, series_eval
from .spline import LinearSpline
from .superlog import SlogEnv, iterate, prepare, slog, tet_crit, tetrate

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "superlog",
    "SlogEnv",
    "prepare",
    "slog",
    "tet_crit",
    "tetrate",
    "iterate",
    "PowerSeries",
    "series_eval",
    "series_compose",
    "LinearSpline",
    "linear_solve",
    "find_root",
    "lambert_w",
    "assumed_form",
    "assumed_form_general",
    "PiecewiseSolution",
    "piecewise_solution",
    "FixedPointSeries",
    "fixed_point_half_series",
    "TargetFn",
    "Candidate",
    "SolverConfig",
    "LossReport",
    "riemann_loss",
    "ica_solve",
    "additive_correct",
    "genetic_solve",
    "compose_iterates",
    "FracIterError",
    "DomainError",
    "BranchDomainError",
    "ConvergenceError",
    "SingularMatrixError",
    "DivergenceError",
    "DegenerateChainError",
    "AbelGateError",
    "ConditioningWarning",
]
