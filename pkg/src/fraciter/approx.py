"""Numerical solvers for functional roots ``g`` with ``g` applied k times = f``.

Everything here scores candidates with the same discretized objective: the
midpoint Riemann sum of ``(g^k(x) - f(x))^2`` over the target's interval.
Three solvers produce candidates:

* :func:`ica_solve` - chain interpolation with a nested grid search over the
  seed pair ``(x_i, w)``;
* :func:`additive_correct` - relaxation ``g <- g + tau * (f - g(g))`` on a
  sampled spline, keeping the best iterate seen;
* :func:`genetic_solve` - mutation-only evolution of Fourier / Taylor /
  spline coefficient vectors with elitist truncation selection.

:func:`compose_iterates` combines two fractional iterates into a non-harmonic
order by composition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction

import numpy as np

from .errors import DegenerateChainError, DivergenceError, DomainError
from .spline import LinearSpline

__all__ = [
    "TargetFn",
    "Candidate",
    "SolverConfig",
    "LossReport",
    "riemann_loss",
    "ica_solve",
    "additive_correct",
    "genetic_solve",
    "compose_iterates",
    "result_to_dict",
]

_KINDS = ("fourier", "taylor", "spline")


@dataclass(frozen=True)
class TargetFn:
    """A known target ``f`` restricted to the interval where it is fitted."""

    fn: object  # callable accepting scalars or numpy arrays
    label: str
    domain: tuple

    def __post_init__(self):
        a, b = (float(self.domain[0]), float(self.domain[1]))
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise DomainError(f"domain must be a finite interval, got {self.domain!r}")
        object.__setattr__(self, "domain", (a, b))

    def __call__(self, x):
        return self.fn(x)


@dataclass
class Candidate:
    """A trial functional root in one of three parametric families.

    ``kind`` is ``"fourier"`` (``sum a_j sin(j x)``), ``"taylor"``
    (``sum c_j x^j / j!``) or ``"spline"`` (piecewise-linear knots).  ``k``
    is the iterate order the candidate is meant for (``g^k = f``); composed
    candidates may carry a :class:`fractions.Fraction` there.  ``loss`` is a
    cache of the riemann loss against the candidate's producing target.
    """

    kind: str
    coeffs: np.ndarray = None
    spline: LinearSpline = None
    k: object = 2
    loss: float = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown candidate kind {self.kind!r}")
        if self.kind == "spline":
            if self.spline is None:
                raise DomainError("spline candidate needs a LinearSpline")
        else:
            arr = np.asarray(self.coeffs, dtype=float)
            if arr.ndim != 1 or arr.size < 1:
                raise DomainError("coefficient candidates need a 1-d coefficient vector")
            self.coeffs = arr

    @classmethod
    def fourier(cls, coeffs, k=2):
        return cls(kind="fourier", coeffs=coeffs, k=k)

    @classmethod
    def taylor(cls, coeffs, k=2):
        return cls(kind="taylor", coeffs=coeffs, k=k)

    @classmethod
    def from_spline(cls, spline, k=2):
        return cls(kind="spline", spline=spline, k=k)

    @property
    def domain(self):
        """Interval the candidate was built on; None when unrestricted."""
        return self.spline.domain if self.kind == "spline" else None

    @property
    def order(self) -> Fraction:
        """Iterate order as a fraction of the target: g = f^order."""
        return 1 / Fraction(self.k)

    def evaluate(self, x):
        if self.kind == "spline":
            return self.spline(x)
        apply = _fourier_apply if self.kind == "fourier" else _taylor_apply
        scalar = np.ndim(x) == 0
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        out = apply(self.coeffs[None, :], xv)[0]
        return float(out[0]) if scalar else out

    def iterated(self, x, k=None):
        """Apply the candidate ``k`` times (defaults to its own integer order)."""
        k = self.k if k is None else k
        if not (isinstance(k, int) and k >= 1):
            raise DomainError(f"iterated application needs an integer k >= 1, got {k!r}")
        y = x
        for _ in range(k):
            y = self.evaluate(y)
        return y


@dataclass
class SolverConfig:
    """Shared solver knobs.

    ``iterations`` doubles as the generation count for the genetic solver;
    when left ``None`` each solver applies its own default (8 refinement
    rounds for ICA, 500 sweeps for additive correction, 2000 generations for
    the genetic algorithm).
    """

    grid_points: int = 512
    iterations: int = None
    population: int = 200
    elite_fraction: float = 0.1
    temperature: float = 0.5
    temperature_decay: float = 0.995
    tau: float = 0.3
    seed: int = None

    def __post_init__(self):
        if self.grid_points < 2:
            raise DomainError("grid_points must be at least 2")
        if self.iterations is not None and self.iterations < 1:
            raise DomainError("iterations must be positive")
        if self.population < 2:
            raise DomainError("population must be at least 2")
        if not (0.0 < self.elite_fraction < 1.0):
            raise DomainError("elite_fraction must lie in (0, 1)")
        if self.temperature <= 0.0:
            raise DomainError("temperature must be positive")
        if not (0.0 < self.temperature_decay <= 1.0):
            raise DomainError("temperature_decay must lie in (0, 1]")
        if self.tau <= 0.0:
            raise DomainError("tau must be positive")
        if self.seed is not None and (self.seed < 0 or self.seed != int(self.seed)):
            raise DomainError("seed must be a non-negative integer")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class LossReport:
    """Riemann loss of one candidate against one target, with its samples."""

    interval: tuple
    grid_points: int
    k: object
    loss: float
    max_residual: float
    residual_samples: list = field(repr=False)
    finite: bool = True


def _midpoints(interval, grid):
    a, b = interval
    dx = (b - a) / grid
    return a + (np.arange(grid) + 0.5) * dx, dx


def riemann_loss(g: Candidate, f: TargetFn, k: int = None, grid: int = 512) -> LossReport:
    """Midpoint Riemann sum of ``(g^k(x) - f(x))^2`` over ``f.domain``.

    Non-finite candidate evaluations yield ``loss = inf`` with the report's
    ``finite`` flag cleared instead of raising, so selection loops stay total.
    """
    k = g.k if k is None else k
    if not (isinstance(k, int) and k >= 1):
        raise DomainError(f"iterate order must be an integer >= 1, got {k!r}")
    if grid < 2:
        raise DomainError("grid must have at least 2 cells")
    x, dx = _midpoints(f.domain, grid)
    fv = np.asarray(f.fn(x), dtype=float)
    if not np.all(np.isfinite(fv)):
        raise DomainError(f"target {f.label!r} is not finite on {f.domain}")
    with np.errstate(all="ignore"):
        gg = np.asarray(g.iterated(x, k), dtype=float)
    finite = bool(np.all(np.isfinite(gg)))
    r = gg - fv
    if finite:
        loss = float(np.sum(r * r) * dx)
        max_residual = float(np.max(np.abs(r)))
    else:
        loss = math.inf
        max_residual = math.inf
    samples = list(zip(x.tolist(), gg.tolist(), fv.tolist()))
    return LossReport(
        interval=f.domain,
        grid_points=grid,
        k=k,
        loss=loss,
        max_residual=max_residual,
        residual_samples=samples,
        finite=finite,
    )


# --- vectorized population evaluation ---------------------------------------
#
# Term-by-term accumulation instead of matrix products keeps the reduction
# order fixed, so repeated runs are bit-identical.


def _fourier_apply(A, X):
    # A: (P, terms); X: (G,) shared grid or (P, G) per-candidate values
    P, terms = A.shape
    if X.ndim == 1:
        X = np.broadcast_to(X, (P, X.size))
    out = np.zeros(X.shape)
    for j in range(terms):
        out += A[:, j : j + 1] * np.sin((j + 1) * X)
    return out


def _taylor_apply(A, X):
    P, terms = A.shape
    if X.ndim == 1:
        X = np.broadcast_to(X, (P, X.size))
    fact = np.array([math.factorial(j) for j in range(terms)])
    W = A / fact
    out = np.broadcast_to(W[:, -1:], X.shape).copy()
    for j in range(terms - 2, -1, -1):
        out = out * X + W[:, j : j + 1]
    return out


class _PopulationScorer:
    """Scores a coefficient matrix against a target on a fixed midpoint grid."""

    def __init__(self, f: TargetFn, kind: str, terms: int, k: int, grid: int):
        self.kind = kind
        self.k = k
        self.x, self.dx = _midpoints(f.domain, grid)
        self.fv = np.asarray(f.fn(self.x), dtype=float)
        if not np.all(np.isfinite(self.fv)):
            raise DomainError(f"target {f.label!r} is not finite on {f.domain}")
        if kind == "spline":
            self.knot_x = np.linspace(f.domain[0], f.domain[1], terms)

    def _apply(self, A, X):
        if self.kind == "fourier":
            return _fourier_apply(A, X)
        if self.kind == "taylor":
            return _taylor_apply(A, X)
        out = np.empty((A.shape[0], X.shape[-1]))
        for p in range(A.shape[0]):
            xv = X if X.ndim == 1 else X[p]
            out[p] = LinearSpline(self.knot_x, A[p])(xv)
        return out

    def losses(self, A):
        with np.errstate(all="ignore"):
            G = self._apply(A, self.x)
            for _ in range(self.k - 1):
                G = self._apply(A, G)
            r = G - self.fv[None, :]
            loss = np.einsum("pg,pg->p", r, r) * self.dx
        return np.where(np.isfinite(loss), loss, np.inf)

    def candidate(self, coeffs, k):
        if self.kind == "spline":
            return Candidate.from_spline(LinearSpline(self.knot_x, coeffs), k=k)
        return Candidate(kind=self.kind, coeffs=np.array(coeffs), k=k)


# --- solvers -----------------------------------------------------------------


def _chain_candidate(f: TargetFn, x0: float, w: float, chain_len: int) -> Candidate:
    """Spline through the constraint chain seeded by ``g(x0) = w``.

    The chain interleaves the two forward orbits: with ``u = [x0, w, f(x0),
    f(w), f(f(x0)), ...]``, every consecutive pair ``(u_t, u_{t+1})`` is a
    point ``g`` must interpolate.
    """
    xs = [x0]
    ys = [w]
    for _ in range(chain_len):
        with np.errstate(all="ignore"):
            xs.append(float(f.fn(xs[-1])))
            ys.append(float(f.fn(ys[-1])))
    u = [v for pair in zip(xs, ys) for v in pair]
    pts = [
        (a, b)
        for a, b in zip(u, u[1:])
        if math.isfinite(a) and math.isfinite(b)
    ]
    pts.sort()
    kept = []
    for x, y in pts:
        if kept and x <= kept[-1][0]:
            continue  # non-monotone pair: drop rather than fold into the spline
        kept.append((x, y))
    if len(kept) < 2:
        raise DegenerateChainError(
            f"only {len(kept)} usable chain knots from seed ({x0!r}, {w!r})"
        )
    return Candidate.from_spline(
        LinearSpline([p[0] for p in kept], [p[1] for p in kept]), k=2
    )


def ica_solve(f: TargetFn, cfg: SolverConfig, chain_len: int = 8, on_round=None):
    """Iterative chain approximation with a shrinking grid search.

    Scans seed pairs ``(x_i, w)`` over ``f.domain`` (13 points per axis),
    builds the constraint chain for each, fits a spline, and scores it; each
    refinement round halves the steps and re-scans 5 points per axis around
    the best pair.  Ties keep the first-found minimum (scan order is
    low-to-high).  Returns ``(candidate, report, x_i_star, w_star)``.
    """
    rounds = cfg.iterations if cfg.iterations is not None else 8
    a, b = f.domain
    step_x = step_w = (b - a) / 12.0
    center_x = center_w = 0.5 * (a + b)
    best = None  # (loss, cand, report, x0, w)

    for rnd in range(rounds):
        if rnd == 0:
            xs = np.linspace(a, b, 13)
            ws = np.linspace(a, b, 13)
        else:
            step_x *= 0.5
            step_w *= 0.5
            xs = center_x + step_x * np.arange(-2, 3)
            ws = center_w + step_w * np.arange(-2, 3)
        for x0 in xs:
            for w in ws:
                try:
                    cand = _chain_candidate(f, float(x0), float(w), chain_len)
                except DegenerateChainError:
                    continue
                rep = riemann_loss(cand, f, k=2, grid=cfg.grid_points)
                if best is None or rep.loss < best[0]:
                    best = (rep.loss, cand, rep, float(x0), float(w))
        if best is None:
            raise DegenerateChainError("no seed pair produced a usable chain")
        center_x, center_w = best[3], best[4]
        if on_round is not None:
            on_round(rnd, best[0])

    loss, cand, rep, x_star, w_star = best
    cand.loss = loss
    return cand, rep, x_star, w_star


def additive_correct(f: TargetFn, g0: Candidate, cfg: SolverConfig, on_iteration=None):
    """Relax a spline candidate toward ``g(g(x)) = f(x)`` by additive updates.

    Each sweep evaluates ``delta = f - g(g)`` on the sample grid, moves the
    knot values by ``tau * delta``, rebuilds the spline, and remembers the
    best-loss iterate, which is what gets returned (so the result is never
    worse than the input).  Raises :class:`DivergenceError` when the loss
    explodes past ``1e6`` times the initial loss.
    """
    if g0.kind != "spline":
        raise DomainError("additive correction rebuilds knot values; give a spline candidate")
    iterations = cfg.iterations if cfg.iterations is not None else 500
    a, b = f.domain
    x_vals = np.linspace(a, b, cfg.grid_points)
    f_vals = np.asarray(f.fn(x_vals), dtype=float)
    g_vals = np.asarray(g0.evaluate(x_vals), dtype=float)

    init_rep = riemann_loss(g0, f, k=2, grid=cfg.grid_points)
    best_cand, best_rep = g0, init_rep
    cur = LinearSpline(x_vals, g_vals)
    for it in range(iterations):
        with np.errstate(all="ignore"):
            approx_vals = cur(cur(x_vals))
        delta = f_vals - approx_vals
        g_vals = g_vals + cfg.tau * delta
        if not np.all(np.isfinite(g_vals)):
            raise DivergenceError("additive correction produced non-finite knot values")
        cur = LinearSpline(x_vals, g_vals)
        cand = Candidate.from_spline(cur, k=2)
        rep = riemann_loss(cand, f, k=2, grid=cfg.grid_points)
        if math.isfinite(init_rep.loss) and init_rep.loss > 0 and rep.loss > 1e6 * init_rep.loss:
            raise DivergenceError(
                f"loss grew to {rep.loss:.3e} from {init_rep.loss:.3e}; tau is too large"
            )
        if rep.loss < best_rep.loss:
            best_cand, best_rep = cand, rep
        if on_iteration is not None:
            on_iteration(it, best_rep.loss)
    best_cand.loss = best_rep.loss
    return best_cand, best_rep


def genetic_solve(f: TargetFn, repr_kind: str, terms: int, k: int, cfg: SolverConfig,
                  log_every: int = 0):
    """Evolve coefficient vectors of the chosen family toward ``g^k = f``.

    A population of ``cfg.population`` candidates starts uniform in [-1, 1];
    each generation keeps the best ``ceil(elite_fraction * population)``
    unchanged and refills the rest with Gaussian perturbations of the elites
    at the current temperature, which then decays.  Returns
    ``(candidate, report, history)`` where ``history`` holds one best-loss
    entry per generation (non-increasing thanks to elitism).
    """
    if repr_kind not in _KINDS:
        raise DomainError(f"repr_kind must be one of {_KINDS}, got {repr_kind!r}")
    if terms < 1 or (repr_kind == "spline" and terms < 2):
        raise DomainError(f"terms too small for {repr_kind!r}: {terms}")
    if not (isinstance(k, int) and k >= 1):
        raise DomainError(f"iterate order must be an integer >= 1, got {k!r}")
    if cfg.seed is None:
        raise DomainError("genetic_solve requires cfg.seed; runs must be reproducible")

    generations = cfg.iterations if cfg.iterations is not None else 2000
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    scorer = _PopulationScorer(f, repr_kind, terms, k, cfg.grid_points)
    pop = cfg.population
    n_elite = math.ceil(cfg.elite_fraction * pop)
    A = rng.uniform(-1.0, 1.0, (pop, terms))
    temperature = cfg.temperature

    history = []
    best_coeffs = None
    for gen in range(generations):
        losses = scorer.losses(A)
        order = np.argsort(losses, kind="stable")
        history.append(float(losses[order[0]]))
        best_coeffs = A[order[0]].copy()
        if log_every and (gen % log_every == 0 or gen == generations - 1):
            print(f"generation {gen:5d}  best loss {history[-1]:.6e}")
        if gen < generations - 1:
            elites = A[order[:n_elite]]
            n_child = pop - n_elite
            parents = elites[np.arange(n_child) % n_elite]
            children = parents + rng.normal(0.0, temperature, (n_child, terms))
            A = np.vstack([elites, children])
            temperature *= cfg.temperature_decay

    cand = scorer.candidate(best_coeffs, k)
    rep = riemann_loss(cand, f, k=k, grid=cfg.grid_points)
    cand.loss = rep.loss
    return cand, rep, history


def compose_iterates(g_a: Candidate, g_b: Candidate, knots: int = 256) -> Candidate:
    """Compose two fractional iterates into order ``1/k_a + 1/k_b``.

    The result evaluates ``g_a(g_b(x))`` and is materialized as a spline
    resampled on the candidates' common interval.  At least one candidate
    must carry a finite domain.
    """
    domains = [d for d in (g_a.domain, g_b.domain) if d is not None]
    if not domains:
        raise DomainError("cannot resample: neither candidate has a finite domain")
    lo = max(d[0] for d in domains)
    hi = min(d[1] for d in domains)
    if not lo < hi:
        raise DomainError(f"candidates have no common interval: [{lo!r}, {hi!r}]")
    xs = np.linspace(lo, hi, knots)
    with np.errstate(all="ignore"):
        ys = np.asarray(g_a.evaluate(g_b.evaluate(xs)), dtype=float)
    if not np.all(np.isfinite(ys)):
        raise DomainError("composition is not finite on the common interval")
    order = 1 / Fraction(g_a.k) + 1 / Fraction(g_b.k)
    k_new = 1 / order
    if k_new.denominator == 1:
        k_new = int(k_new)
    return Candidate.from_spline(LinearSpline(xs, ys), k=k_new)


# --- result serialization -----------------------------------------------------


def result_to_dict(cand: Candidate, report: LossReport, cfg: SolverConfig) -> dict:
    """JSON-ready summary of a solver run (deterministic field order)."""
    k = cand.k
    out = {
        "repr": cand.kind,
        "k": k if isinstance(k, int) else f"{k.numerator}/{k.denominator}",
        "loss": report.loss,
        "seed": cfg.seed,
        "config": cfg.to_dict(),
    }
    if cand.kind == "spline":
        out["knots"] = [list(p) for p in cand.spline.knots]
        out["terms"] = len(cand.spline.xs)
    else:
        out["coeffs"] = cand.coeffs.tolist()
        out["terms"] = int(cand.coeffs.size)
    return out
