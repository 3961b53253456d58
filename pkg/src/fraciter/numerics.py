"""Scalar and small-matrix numerics: dense solve, root finding, Lambert W."""

from __future__ import annotations

import math
import warnings

import numpy as np

from .errors import ConditioningWarning, ConvergenceError, DomainError, SingularMatrixError

__all__ = ["linear_solve", "find_root", "lambert_w"]

_INV_E = math.exp(-1.0)


def linear_solve(m, rhs):
    """Solve ``m @ x = rhs`` by Gaussian elimination with partial pivoting.

    ``m`` must be square and finite.  Raises :class:`SingularMatrixError` when
    a pivot falls below ``1e-14`` times its row's scale, and emits a
    :class:`ConditioningWarning` when the estimated condition number exceeds
    ``1e12`` (the solution is still returned).
    """
    a = np.array(m, dtype=float)
    b = np.array(rhs, dtype=float).reshape(-1)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if b.size != n:
        raise DomainError(f"rhs length {b.size} does not match matrix size {n}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DomainError("matrix and rhs entries must be finite")

    scales = np.max(np.abs(a), axis=1)
    scales[scales == 0.0] = 1.0

    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[piv, col]) < 1e-14 * scales[piv]:
            raise SingularMatrixError(
                f"pivot {a[piv, col]:.3e} below tolerance in column {col}"
            )
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
            scales[[col, piv]] = scales[[piv, col]]
        factors = a[col + 1 :, col] / a[col, col]
        a[col + 1 :, col:] -= np.outer(factors, a[col, col:])
        b[col + 1 :] -= factors * b[col]

    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - a[i, i + 1 :] @ x[i + 1 :]) / a[i, i]

    try:
        cond = np.linalg.cond(np.asarray(m, dtype=float), np.inf)
    except np.linalg.LinAlgError:
        cond = np.inf
    if cond > 1e12:
        warnings.warn(
            f"linear system condition number ~{cond:.2e}; solution digits are suspect",
            ConditioningWarning,
            stacklevel=2,
        )
    return x


def find_root(fn, guess, bracket=None, max_iter=50):
    """Find ``r`` with ``fn(r) = 0`` to ``|fn(r)| <= 1e-13 * (1 + |r|)``.

    Newton iteration with a central-difference derivative (step
    ``1e-7 * (1 + |x|)``); when a sign-changing ``bracket`` is supplied and
    Newton stalls, diverges, or leaves the bracket, bisection takes over.
    """

    def tol(x):
        return 1e-13 * (1.0 + abs(x))

    lo = hi = flo = None
    if bracket is not None:
        lo, hi = float(bracket[0]), float(bracket[1])
        if lo > hi:
            lo, hi = hi, lo
        flo, fhi = fn(lo), fn(hi)
        if abs(flo) <= tol(lo):
            return lo
        if abs(fhi) <= tol(hi):
            return hi
        if flo * fhi > 0:
            raise DomainError(
                f"bracket [{lo:g}, {hi:g}] does not change sign: f={flo:g}, {fhi:g}"
            )

    x = float(guess)
    newton_ok = True
    for _ in range(max_iter):
        fx = fn(x)
        if not math.isfinite(fx):
            newton_ok = False
            break
        if abs(fx) <= tol(x):
            return x
        h = 1e-7 * (1.0 + abs(x))
        d = (fn(x + h) - fn(x - h)) / (2.0 * h)
        if not math.isfinite(d) or d == 0.0:
            newton_ok = False
            break
        step = fx / d
        x_new = x - step
        if not math.isfinite(x_new):
            newton_ok = False
            break
        if bracket is not None and not (lo <= x_new <= hi):
            newton_ok = False
            break
        x = x_new
    else:
        newton_ok = False

    if newton_ok:
        return x
    if bracket is None:
        raise ConvergenceError(f"Newton failed near x={x!r} and no bracket was given")

    # Bisection fallback: the bracket is guaranteed sign-changing.
    a, b, fa = lo, hi, flo
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = fn(mid)
        if abs(fm) <= tol(mid):
            return mid
        if (b - a) <= 4.0 * math.ulp(max(abs(a), abs(b), 1.0)):
            break
        if fa * fm <= 0:
            b = mid
        else:
            a, fa = mid, fm
    mid = 0.5 * (a + b)
    if abs(fn(mid)) <= tol(mid):
        return mid
    raise ConvergenceError(
        f"root not located to tolerance on [{lo:g}, {hi:g}]; best {mid!r}"
    )


def lambert_w(x: float) -> float:
    """Principal branch ``W_0`` of the Lambert W function for ``x >= -1/e``.

    Satisfies ``w * exp(w) = x`` to a relative residual of ``1e-12`` and
    ``w >= -1``.  Halley refinement from a log / branch-point-series start.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"lambert_w argument must be finite, got {x}")
    if x < -_INV_E:
        raise DomainError(f"lambert_w is real only for x >= -1/e, got {x}")
    if x == 0.0:
        return 0.0

    d = x + _INV_E
    if d <= 1e-9:
        # So close to the branch point that the series alone is at full accuracy
        # and Halley's denominator (w + 1) is numerically useless.
        p = math.sqrt(2.0 * math.e * d)
        return -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0

    if x >= 0.0:
        w = math.log1p(x)
    else:
        p = math.sqrt(2.0 * math.e * d)
        w = -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0

    for _ in range(60):
        ew = math.exp(w)
        r = w * ew - x
        w1 = w + 1.0
        dw = r / (ew * w1 - (w + 2.0) * r / (2.0 * w1))
        w -= dw
        if abs(dw) <= 1e-16 * (1.0 + abs(w)):
            break

    if abs(w * math.exp(w) - x) > 1e-12 * (1.0 + abs(x)):
        raise ConvergenceError(f"lambert_w failed to converge at x={x!r}")
    return max(w, -1.0)
