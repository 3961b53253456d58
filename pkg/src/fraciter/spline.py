"""Piecewise-linear interpolation on strictly increasing knots."""

from __future__ import annotations

import numpy as np

from .errors import DomainError

__all__ = ["LinearSpline"]


class LinearSpline:
    """Continuous piecewise-linear interpolant.

    Exact at every knot; outside the knot range it continues with the slope
    of the nearest end segment instead of clamping.
    """

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise DomainError("knots must be two equal-length 1-d sequences")
        if xs.size < 2:
            raise DomainError("spline needs at least two knots")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise DomainError("knots must be finite")
        if np.any(np.diff(xs) <= 0):
            raise DomainError("knot x-values must be strictly increasing")
        self.xs = xs.copy()
        self.ys = ys.copy()
        self.xs.flags.writeable = False
        self.ys.flags.writeable = False

    @classmethod
    def from_points(cls, points):
        pts = sorted(points)
        return cls([p[0] for p in pts], [p[1] for p in pts])

    @property
    def knots(self):
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    @property
    def domain(self):
        return float(self.xs[0]), float(self.xs[-1])

    def __call__(self, x):
        scalar = np.isscalar(x)
        x = np.asarray(x, dtype=float)
        # segment index for each point; end segments extend past the knots
        idx = np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, self.xs.size - 2)
        x0 = self.xs[idx]
        slope = (self.ys[idx + 1] - self.ys[idx]) / (self.xs[idx + 1] - self.xs[idx])
        out = self.ys[idx] + slope * (x - x0)
        return float(out) if scalar else out

    def inverse(self) -> "LinearSpline":
        """Spline through the swapped knots; needs strictly monotone y-values."""
        dy = np.diff(self.ys)
        if np.all(dy > 0):
            return LinearSpline(self.ys, self.xs)
        if np.all(dy < 0):
            return LinearSpline(self.ys[::-1], self.xs[::-1])
        raise DomainError("cannot invert a non-monotone spline")

    def __repr__(self):
        return f"LinearSpline({self.xs.size} knots on [{self.xs[0]:g}, {self.xs[-1]:g}])"
