import math
from fractions import Fraction

import numpy as np
import pytest

from fraciter import (
    BranchDomainError,
    DomainError,
    PowerSeries,
    assumed_form,
    assumed_form_general,
    fixed_point_half_series,
    lambert_w,
    piecewise_solution,
    series_compose,
    series_eval,
)

SIN9 = PowerSeries(
    (0.0, 1.0, 0.0, -1 / 6.0, 0.0, 1 / 120.0, 0.0, -1 / 5040.0, 0.0, 1 / 362880.0)
)

# Exact-rational coefficient-matching oracle, computed with Fraction arithmetic
HALF_SIN_EXACT = [
    Fraction(0),
    Fraction(1),
    Fraction(0),
    Fraction(-1, 12),
    Fraction(0),
    Fraction(-1, 160),
    Fraction(0),
    Fraction(-53, 40320),
    Fraction(0),
    Fraction(-23, 71680),
]


class TestAssumedForm:
    def test_value_at_one(self):
        assert assumed_form(1.0) == pytest.approx(1.0 / lambert_w(1.0), rel=1e-14)
        assert assumed_form(1.0) == pytest.approx(1.76322283435, abs=1e-9)

    def test_defining_identity_at_one(self):
        y = assumed_form(1.0)
        assert y ** (y ** 1.0) == pytest.approx(math.e, rel=1e-12)

    def test_identity_at_two(self):
        y = assumed_form(2.0)
        assert y ** (y ** 2.0) == pytest.approx(math.exp(2.0), rel=1e-10)

    def test_identity_on_log_spaced_grid(self):
        xs = np.exp(np.linspace(math.log(0.01), math.log(10.0), 100))
        for x in xs:
            x = float(x)
            y = assumed_form(x)
            assert abs(y ** (y ** x) - math.exp(x)) / math.exp(x) <= 1e-10

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            assumed_form(0.0)
        with pytest.raises(DomainError):
            assumed_form(-1.0)


class TestAssumedFormGeneral:
    def test_reduces_to_plain_form(self):
        one = lambda x: 1.0
        ident = lambda x: x
        for x in (0.5, 1.0, 2.0, 7.0):
            assert assumed_form_general(one, ident, x) == pytest.approx(
                assumed_form(x), rel=1e-13
            )

    def test_x_exp_x_at_one(self):
        # target x e^x: argument of W is 1*ln(1) + 1*1 = 1
        y = assumed_form_general(lambda x: x, lambda x: x, 1.0)
        assert y == pytest.approx(1.0 / lambert_w(1.0), rel=1e-13)

    def test_x_exp_x_at_two(self):
        t = 2.0 * math.log(2.0) + 4.0
        expected = (t / lambert_w(t)) ** 0.5
        y = assumed_form_general(lambda x: x, lambda x: x, 2.0)
        assert y == pytest.approx(expected, rel=1e-12)

    def test_defining_identity(self):
        a = lambda x: x
        b = lambda x: x
        for x in (0.5, 1.0, 2.0, 3.5):
            y = assumed_form_general(a, b, x)
            assert y ** (y ** x) == pytest.approx(a(x) * math.exp(b(x)), rel=1e-10)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            assumed_form_general(lambda x: -1.0, lambda x: x, 1.0)
        with pytest.raises(DomainError):
            assumed_form_general(lambda x: 1.0, lambda x: x, 0.0)


class TestPiecewiseSolution:
    def test_affine_default_endpoints(self):
        f = piecewise_solution()
        assert f(0.0) == pytest.approx(1.0, abs=1e-15)
        assert f(1.0) == pytest.approx(math.e, abs=1e-15)

    def test_defining_equation_residual_affine(self):
        f = piecewise_solution()
        assert f.defining_residual(101) <= 0.05

    def test_defining_equation_residual_slog(self, env_e30):
        f = piecewise_solution(env=env_e30)
        assert f.defining_residual(101) <= 1e-3

    def test_strictly_increasing_on_seed_interval(self):
        f = piecewise_solution()
        xs = np.linspace(0.0, 1.0, 101)
        vals = [f(float(x)) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert len(set(vals)) == len(vals)  # injective on the grid

    def test_recursion_above_e(self):
        f = piecewise_solution()
        v = f(5.0)
        assert math.isfinite(v) and v > math.exp(1.0)

    def test_negative_branch_raises(self):
        f = piecewise_solution()
        with pytest.raises(BranchDomainError):
            f(-0.5)

    def test_custom_knots_validated(self):
        good = [(0.0, 1.0), (0.5, 1.8), (1.0, math.e)]
        f = piecewise_solution(phi_knots=good)
        assert f(0.5) == pytest.approx(1.8)
        with pytest.raises(DomainError):
            piecewise_solution(phi_knots=[(0.0, 1.0), (1.0, 2.0)])  # wrong top endpoint
        with pytest.raises(DomainError):
            piecewise_solution(phi_knots=[(0.0, 1.0), (0.4, 2.9), (1.0, math.e)])  # not increasing to e
        with pytest.raises(DomainError):
            piecewise_solution(phi_knots=[(0.1, 1.0), (1.0, math.e)])  # wrong left x

    def test_json_export(self):
        f = piecewise_solution()
        payload = f.to_json()
        assert "knots" in payload


class TestFixedPointHalfSeries:
    def test_identity_target(self):
        fps = fixed_point_half_series(PowerSeries((0.0, 1.0)), 5)
        assert fps.half.coeffs == (0.0, 1.0, 0.0, 0.0, 0.0, 0.0)

    def test_first_three_derivative_values_exact(self):
        fps = fixed_point_half_series(SIN9, 7)
        assert fps.half.coeffs[0] == 0.0
        assert fps.half.coeffs[1] == 1.0
        assert fps.half.coeffs[2] == 0.0

    def test_sin_order7_matches_exact_oracle(self):
        fps = fixed_point_half_series(SIN9, 7)
        for got, exact in zip(fps.half.coeffs, HALF_SIN_EXACT[:8]):
            assert abs(got - float(exact)) <= 1e-12

    def test_sin_order9_matches_exact_oracle(self):
        fps = fixed_point_half_series(SIN9, 9)
        for got, exact in zip(fps.half.coeffs, HALF_SIN_EXACT):
            assert abs(got - float(exact)) <= 1e-12

    def test_composition_reproduces_target(self):
        fps = fixed_point_half_series(SIN9, 9)
        composed = series_compose(fps.half, fps.half, 9)
        for a, b in zip(composed.coeffs, fps.target.coeffs):
            assert abs(a - b) <= 1e-12

    def test_evaluation_against_sin(self):
        fps = fixed_point_half_series(SIN9, 9)
        for x in np.linspace(-0.5, 0.5, 41):
            x = float(x)
            gg = series_eval(fps.half, series_eval(fps.half, x))
            assert abs(gg - math.sin(x)) <= 1e-6

    def test_unsupported_fixed_point_rejected(self):
        with pytest.raises(DomainError):
            fixed_point_half_series(PowerSeries((0.1, 1.0)), 3)
        with pytest.raises(DomainError):
            fixed_point_half_series(PowerSeries((0.0, 0.5)), 3)
        with pytest.raises(DomainError):
            fixed_point_half_series(PowerSeries((0.0, 1.0), center=1.0), 3)

    def test_json_export(self):
        fps = fixed_point_half_series(SIN9, 7)
        assert "half" in fps.to_json()
