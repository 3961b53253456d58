"""Truncated power series with evaluation and composition.

A :class:`PowerSeries` stores plain Taylor coefficients ``c_0 .. c_n`` about a
center ``a``, i.e. it represents ``sum_k c_k (x - a)^k``.  Factorial-weighted
conventions used elsewhere in the library are converted to plain coefficients
at construction time, so there is a single canonical representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["PowerSeries", "series_eval", "series_compose"]


@dataclass(frozen=True)
class PowerSeries:
    """Polynomial truncation of a Taylor expansion about ``center``."""

    coeffs: tuple
    center: float = 0.0

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise DomainError("power series needs at least one coefficient")
        if not all(math.isfinite(c) for c in coeffs):
            raise DomainError("power series coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "center", float(self.center))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return series_eval(self, x)

    def derivative(self) -> "PowerSeries":
        if len(self.coeffs) == 1:
            return PowerSeries((0.0,), self.center)
        d = tuple(k * c for k, c in enumerate(self.coeffs) if k > 0)
        return PowerSeries(d, self.center)

    def truncated(self, order: int) -> "PowerSeries":
        if order < 0:
            raise DomainError("order must be non-negative")
        c = self.coeffs[: order + 1]
        c = c + (0.0,) * (order + 1 - len(c))
        return PowerSeries(c, self.center)


def series_eval(s: PowerSeries, x: float) -> float:
    """Evaluate ``s`` at ``x`` by Horner's rule.

    The value at the center is exactly ``c_0``.
    """
    if not math.isfinite(x):
        raise DomainError(f"series argument must be finite, got {x}")
    u = x - s.center
    acc = 0.0
    for c in reversed(s.coeffs):
        acc = acc * u + c
    return acc


def series_compose(outer: PowerSeries, inner: PowerSeries, order: int) -> PowerSeries:
    """Taylor coefficients of ``outer(inner(x))`` about ``inner.center``.

    Requires ``inner(center) == outer.center`` so the composition is again a
    local expansion (the fixed-point situation).  The result is truncated at
    ``order``.
    """
    if order < 0:
        raise DomainError("order must be non-negative")
    if inner.coeffs[0] != outer.center:
        raise DomainError(
            "composition centers mismatch: inner constant term is "
            f"{inner.coeffs[0]!r} but outer is centered at {outer.center!r}"
        )
    n = order + 1
    # d(x) = inner(x) - outer.center has no constant term in (x - inner.center)
    d = [0.0] * n
    for k, c in enumerate(inner.coeffs[1:n], start=1):
        d[k] = c

    out = [0.0] * n
    out[0] = outer.coeffs[0]
    # Accumulate outer_j * d(x)^j, keeping every power series truncated at n.
    power = [0.0] * n
    power[0] = 1.0
    for j, oj in enumerate(outer.coeffs[1:], start=1):
        if j >= n and power[0] == 0.0 and not any(power):
            break
        power = _poly_mul_trunc(power, d, n)
        if not any(power):
            break
        for i, p in enumerate(power):
            out[i] += oj * p
    return PowerSeries(tuple(out), inner.center)


def _poly_mul_trunc(a, b, n):
    out = [0.0] * n
    for i, ai in enumerate(a):
        if ai == 0.0:
            continue
        for j, bj in enumerate(b):
            k = i + j
            if k >= n:
                break
            if bj != 0.0:
                out[k] += ai * bj
    return out
