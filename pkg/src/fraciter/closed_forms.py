"""Closed-form and semi-closed constructions for exponential functional roots.

Three unrelated-looking tools that all answer "what applied twice gives the
exponential family?":

* ``assumed_form`` solves ``y^(y^x) = e^x`` exactly through the Lambert W
  function, and ``assumed_form_general`` extends it to targets
  ``a(x) * exp(b(x))``.
* ``piecewise_solution`` builds the classic seed-and-extend construction:
  pick a monotone ``phi`` on [0, 1] with endpoints (0, 1) and (1, e), then
  propagate it with the functional equation.
* ``fixed_point_half_series`` produces the Taylor coefficients of a half
  iterate at a parabolic fixed point (the ``sin`` situation) by matching
  the composition degree by degree.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchDomainError, DomainError
from .numerics import lambert_w
from .series import PowerSeries, series_compose
from .spline import LinearSpline

__all__ = [
    "assumed_form",
    "assumed_form_general",
    "PiecewiseSolution",
    "piecewise_solution",
    "FixedPointSeries",
    "fixed_point_half_series",
]

_E = math.e


def assumed_form(x: float) -> float:
    """The function with ``f(x) ** f(x)**x == e**x`` for ``x > 0``.

    Closed form ``(x^2 / W(x^2))^(1/x)``, evaluated in the equivalent and
    better-conditioned shape ``exp(W(x^2) / x)``.
    """
    if not (isinstance(x, (int, float)) and math.isfinite(x)) or x <= 0.0:
        raise DomainError(f"assumed form is defined for x > 0, got {x!r}")
    return math.exp(lambert_w(x * x) / x)


def assumed_form_general(a, b, x: float) -> float:
    """Solve ``y^(y^x) = a(x) * exp(b(x))`` for ``y`` at one point ``x > 0``.

    ``a`` and ``b`` are callables.  The Lambert argument is
    ``t = x*log(a(x)) + x*b(x)`` and the value is ``(t / W(t))^(1/x)``;
    with ``a == 1`` and ``b`` the identity this reduces to
    :func:`assumed_form`.
    """
    if not (isinstance(x, (int, float)) and math.isfinite(x)) or x <= 0.0:
        raise DomainError(f"assumed form is defined for x > 0, got {x!r}")
    ax = float(a(x))
    if ax <= 0.0:
        raise DomainError(f"a(x) must be positive, got a({x!r}) = {ax!r}")
    t = x * math.log(ax) + x * float(b(x))
    if t == 0.0:
        return 1.0
    return math.exp(lambert_w(t) / x)


class PiecewiseSolution:
    """Seed-and-extend approximate solution of ``f(f(x)) = e^x``.

    ``phi`` is a strictly increasing spline from [0, 1] onto [1, e].  For
    arguments in (1, e] the value is read off the precomputed inverse table
    (``exp(phi^{-1}(x))``, which is what makes ``f(f(x)) = e^x`` hold on the
    seed interval); above ``e`` the functional-equation recursion
    ``f(x) = exp(f(log x))`` walks the argument down.  For ``x < 0`` the
    construction's inverse is never defined, so evaluation raises
    :class:`BranchDomainError` rather than guessing an extension.
    """

    def __init__(self, phi: LinearSpline):
        x0, x1 = phi.domain
        if not (math.isclose(x0, 0.0, abs_tol=1e-9) and math.isclose(x1, 1.0, abs_tol=1e-9)):
            raise DomainError(f"phi must be defined on [0, 1], got [{x0!r}, {x1!r}]")
        y0, y1 = float(phi.ys[0]), float(phi.ys[-1])
        if not (math.isclose(y0, 1.0, rel_tol=1e-9) and math.isclose(y1, _E, rel_tol=1e-9)):
            raise DomainError(
                f"phi endpoints must be (0, 1) and (1, e), got values {y0!r}, {y1!r}"
            )
        if np.any(np.diff(phi.ys) <= 0):
            raise DomainError("phi must be strictly increasing")
        self.phi = phi
        self.phi_inverse = phi.inverse()

    def __call__(self, x: float) -> float:
        if not math.isfinite(x):
            raise DomainError(f"argument must be finite, got {x!r}")
        if 0.0 <= x <= 1.0:
            return self.phi(x)
        if x > 1.0:
            if x <= _E:
                return math.exp(self.phi_inverse(x))
            return math.exp(self(math.log(x)))
        raise BranchDomainError(
            f"the x < 0 branch log(f^-1(x)) needs f^-1 at {x!r}, which lies "
            "outside the inverse table's range [1, e]"
        )

    def defining_residual(self, points: int = 101):
        """Max of |f(f(x)) - e^x| over a uniform grid on the seed interval."""
        xs = np.linspace(0.0, 1.0, points)
        worst = 0.0
        for x in xs:
            x = float(x)
            worst = max(worst, abs(self(self(x)) - math.exp(x)))
        return worst

    def to_json(self) -> str:
        return json.dumps({"knots": self.phi.knots}, sort_keys=True)


def piecewise_solution(phi_knots=None, env=None) -> PiecewiseSolution:
    """Build a :class:`PiecewiseSolution` from knots, an environment, or neither.

    With ``phi_knots`` given they are used verbatim (and validated).  With an
    ``env`` from :mod:`fraciter.superlog`, ``phi`` samples the environment's
    half-iterate composed with itself on 64 knots, which lands [0, 1] on
    [1, e] and keeps the two constructions consistent.  With neither, ``phi``
    is the affine map ``1 + (e - 1) x``.
    """
    if phi_knots is not None:
        spline = LinearSpline([p[0] for p in phi_knots], [p[1] for p in phi_knots])
        return PiecewiseSolution(spline)
    if env is not None:
        from .superlog import iterate

        xs = np.linspace(0.0, 1.0, 64)
        ys = np.array([iterate(env, 0.5, iterate(env, 0.5, float(x))) for x in xs])
        # The endpoints are 1 and e exactly up to root-solve tolerance; snap them.
        ys[0], ys[-1] = 1.0, _E
        return PiecewiseSolution(LinearSpline(xs, ys))
    return PiecewiseSolution(LinearSpline([0.0, 1.0], [1.0, _E]))


@dataclass(frozen=True)
class FixedPointSeries:
    """A target series and its half iterate at a parabolic fixed point."""

    target: PowerSeries
    half: PowerSeries
    order: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "order": self.order,
                "target": list(self.target.coeffs),
                "half": list(self.half.coeffs),
            },
            sort_keys=True,
        )


def fixed_point_half_series(target: PowerSeries, order: int) -> FixedPointSeries:
    """Taylor coefficients of ``g`` with ``g(g(x)) = target(x)`` through ``order``.

    Requires the target centered at 0 with ``c_0 = 0`` and ``c_1 = 1``; each
    new coefficient of ``g`` then enters the composed series linearly with
    factor 2, so matching proceeds degree by degree with scalar solves.
    """
    if order < 1:
        raise DomainError("order must be at least 1")
    if target.center != 0.0:
        raise DomainError("target must be centered at 0")
    t = target.truncated(order)
    if t.coeffs[0] != 0.0 or t.coeffs[1] != 1.0:
        raise DomainError(
            "only the parabolic fixed point (c0 = 0, c1 = 1) is supported; "
            f"got c0 = {t.coeffs[0]!r}, c1 = {t.coeffs[1]!r}"
        )
    g = [0.0, 1.0] + [0.0] * (order - 1)
    for m in range(2, order + 1):
        composed = series_compose(PowerSeries(tuple(g)), PowerSeries(tuple(g)), m)
        mismatch = t.coeffs[m] - composed.coeffs[m]
        g[m] = mismatch / 2.0
    half = PowerSeries(tuple(g))
    return FixedPointSeries(target=t, half=half, order=order)
