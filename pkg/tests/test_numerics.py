import math

import numpy as np
import pytest

from fraciter import (
    ConditioningWarning,
    ConvergenceError,
    DomainError,
    SingularMatrixError,
    find_root,
    lambert_w,
    linear_solve,
)

_INV_E = math.exp(-1.0)


class TestLinearSolve:
    def test_identity(self):
        x = linear_solve(np.eye(2), [3.0, 7.0])
        assert np.allclose(x, [3.0, 7.0], atol=1e-14)

    def test_diagonal(self):
        x = linear_solve([[2.0, 0.0], [0.0, 4.0]], [2.0, 8.0])
        assert np.allclose(x, [1.0, 2.0], atol=1e-14)

    def test_seeded_random_residuals(self):
        rng = np.random.default_rng(20240809)
        for n in (3, 8, 17, 40):
            m = rng.uniform(-1, 1, (n, n)) + n * np.eye(n)
            b = rng.uniform(-1, 1, n)
            x = linear_solve(m, b)
            residual = np.max(np.abs(m @ x - b))
            assert residual <= 1e-9 * (1 + np.max(np.abs(b)))

    def test_pivoting_handles_zero_leading_entry(self):
        m = [[0.0, 1.0], [1.0, 0.0]]
        x = linear_solve(m, [2.0, 3.0])
        assert np.allclose(x, [3.0, 2.0])

    def test_singular_raises(self):
        with pytest.raises(SingularMatrixError):
            linear_solve([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])

    def test_shape_validation(self):
        with pytest.raises(DomainError):
            linear_solve([[1.0, 2.0]], [1.0])
        with pytest.raises(DomainError):
            linear_solve(np.eye(2), [1.0])
        with pytest.raises(DomainError):
            linear_solve([[math.inf, 0.0], [0.0, 1.0]], [1.0, 1.0])

    def test_conditioning_warning(self):
        # Vandermonde system on clustered nodes: solvable but badly conditioned
        nodes = np.linspace(0.0, 1.0, 12)
        m = np.vander(nodes, increasing=True)
        b = np.ones(12)
        with pytest.warns(ConditioningWarning):
            x = linear_solve(m, b)
        assert np.all(np.isfinite(x))


class TestFindRoot:
    def test_linear(self):
        assert find_root(lambda x: x - 1.0, 0.3) == pytest.approx(1.0, abs=1e-13)

    def test_sqrt2_with_bracket(self):
        r = find_root(lambda x: x * x - 2.0, 1.5, bracket=(1.0, 2.0))
        assert r == pytest.approx(math.sqrt(2.0), abs=1e-13)
        assert abs(r * r - 2.0) <= 1e-13 * (1 + abs(r))

    def test_bisection_fallback_when_newton_escapes(self):
        # Flat tails push Newton far outside; the bracket still pins the root.
        fn = lambda x: math.tanh(10.0 * (x - 0.5))
        r = find_root(fn, -40.0, bracket=(-1.0, 1.5))
        assert r == pytest.approx(0.5, abs=1e-9)
        assert abs(fn(r)) <= 1e-13 * (1 + abs(r))

    def test_no_convergence_without_bracket(self):
        with pytest.raises(ConvergenceError):
            find_root(lambda x: 1.0 + x * x, 0.0)

    def test_bad_bracket_raises(self):
        with pytest.raises(DomainError):
            find_root(lambda x: x * x + 1.0, 0.5, bracket=(0.0, 1.0))


class TestLambertW:
    def test_known_values(self):
        assert lambert_w(0.0) == 0.0
        assert lambert_w(math.e) == pytest.approx(1.0, abs=1e-14)
        # Omega constant, frozen from Newton iteration on w e^w = 1
        assert lambert_w(1.0) == pytest.approx(0.5671432904097838, abs=1e-14)

    def test_identity_on_log_spaced_grid(self):
        ts = np.exp(np.linspace(math.log(1e-6), math.log(10.0 + _INV_E), 200))
        for t in ts:
            x = float(t) - _INV_E
            w = lambert_w(x)
            assert abs(w * math.exp(w) - x) <= 1e-12 * (1 + abs(x))
            assert w >= -1.0

    def test_matches_scipy(self):
        from scipy.special import lambertw as scipy_w

        for x in (-0.36, -0.1, 0.05, 0.9, 4.2, 123.0, 9.9e4):
            assert lambert_w(x) == pytest.approx(float(scipy_w(x).real), abs=1e-12)

    def test_strictly_increasing(self):
        xs = np.linspace(-_INV_E + 1e-6, 10.0, 500)
        ws = [lambert_w(float(x)) for x in xs]
        assert all(b > a for a, b in zip(ws, ws[1:]))

    def test_branch_point(self):
        assert lambert_w(-_INV_E) == pytest.approx(-1.0, abs=1e-7)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            lambert_w(-0.5)
        with pytest.raises(DomainError):
            lambert_w(math.nan)
