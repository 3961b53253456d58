"""Self-check suites over the library's defining identities.

Each suite returns a :class:`SuiteResult`; :func:`run_all` collects every
suite that applies (some need a prepared slog environment, some do not).
These are the same identities the test suite pins, packaged for the command
line and for quick sanity checks on loaded environments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import superlog
from .closed_forms import assumed_form, fixed_point_half_series
from .numerics import lambert_w
from .series import PowerSeries, series_compose, series_eval

__all__ = ["SuiteResult", "run_all"]

_INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _lambert_suite():
    xs = np.exp(np.linspace(math.log(1e-6), math.log(1e3 + _INV_E), 200)) - _INV_E
    worst = 0.0
    for x in xs:
        w = lambert_w(float(x))
        worst = max(worst, abs(w * math.exp(w) - x) / (1.0 + abs(x)))
    return SuiteResult("lambert-w identity", worst <= 1e-12, f"max rel residual {worst:.2e}")


def _assumed_form_suite():
    xs = np.exp(np.linspace(math.log(0.01), math.log(10.0), 100))
    worst = 0.0
    for x in xs:
        y = assumed_form(float(x))
        worst = max(worst, abs(y ** (y ** x) - math.exp(x)) / math.exp(x))
    return SuiteResult("assumed-form identity", worst <= 1e-10, f"max rel residual {worst:.2e}")


def _fixed_point_suite():
    sin9 = PowerSeries((0.0, 1.0, 0.0, -1 / 6.0, 0.0, 1 / 120.0, 0.0, -1 / 5040.0, 0.0, 1 / 362880.0))
    fps = fixed_point_half_series(sin9, 9)
    composed = series_compose(fps.half, fps.half, 9)
    coeff_err = max(abs(a - bb) for a, bb in zip(composed.coeffs, fps.target.coeffs))
    worst = 0.0
    for x in np.linspace(-0.5, 0.5, 41):
        gg = series_eval(fps.half, series_eval(fps.half, float(x)))
        worst = max(worst, abs(gg - math.sin(float(x))))
    ok = coeff_err <= 1e-12 and worst <= 1e-6
    return SuiteResult(
        "fixed-point composition", ok, f"coeff err {coeff_err:.2e}, eval err {worst:.2e}"
    )


def _abel_suite(env):
    residual = superlog.abel_residual(env)
    tol = 1e-5 if env.order >= 10 else 1e-3
    return SuiteResult("abel shift identity", residual <= tol, f"residual {residual:.2e}")


def _round_trip_suite(env):
    worst = 0.0
    for y in np.linspace(-0.9, 3.0, 79):
        y = float(y)
        worst = max(worst, abs(superlog.slog(env, superlog.tetrate(env, y)) - y))
    return SuiteResult("slog/tetrate round trip", worst <= 1e-7, f"max |slog(tet(y))-y| {worst:.2e}")


def _monotonicity_suite(env):
    zs = np.linspace(0.01, 20.0, 200)
    vals = [superlog.slog(env, float(z)) for z in zs]
    ok = all(b > a for a, b in zip(vals, vals[1:]))
    return SuiteResult("slog monotonicity", ok, "strictly increasing on [0.01, 20]" if ok else "monotonicity violated")


def _semigroup_suite(env):
    worst = 0.0
    for na in (0.25, 0.5, 1.0):
        for nb in (0.25, 0.5, 1.0):
            for x in np.linspace(0.1, 2.0, 9):
                x = float(x)
                two = superlog.iterate(env, na, superlog.iterate(env, nb, x))
                one = superlog.iterate(env, na + nb, x)
                worst = max(worst, abs(two - one) / (1.0 + abs(one)))
    return SuiteResult("iterate semigroup", worst <= 1e-6, f"max rel deviation {worst:.2e}")


def _half_iterate_suite(env):
    worst = 0.0
    for x in np.linspace(0.0, 2.0, 50):
        x = float(x)
        gg = superlog.iterate(env, 0.5, superlog.iterate(env, 0.5, x))
        worst = max(worst, abs(gg - math.exp(x)) / math.exp(x))
    return SuiteResult("half-iterate functional equation", worst <= 1e-4, f"max rel residual {worst:.2e}")


def run_all(env=None):
    """Run every applicable suite; environment-dependent ones need ``env``."""
    results = [_lambert_suite(), _assumed_form_suite(), _fixed_point_suite()]
    if env is not None:
        results += [
            _abel_suite(env),
            _round_trip_suite(env),
            _monotonicity_suite(env),
            _semigroup_suite(env),
            _half_iterate_suite(env),
        ]
    return results
