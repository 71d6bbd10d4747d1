"""Power-law fits over dyadic eps grids and the curve probe for the Lojasiewicz exponent."""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import AllDirectionsDegenerate, DomainError, InsufficientPoints, NonpositiveValue
from .poly import SparsePolynomial, evaluate_many, gradient_many, stable_norm

ALPHA_CEIL = 1.0 - 1e-3
DEFAULT_T_GRID = tuple(np.logspace(-1, -5, 41))


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    log_constant: float
    r_squared: float
    points: tuple  # ((eps, value, std_error), ...) as supplied, rejected points dropped
    n_rejected: int = 0

    def to_dict(self):
        return {"exponent": self.exponent, "log_constant": self.log_constant,
                "r_squared": self.r_squared, "n_rejected": self.n_rejected,
                "points": [list(p) for p in self.points]}


def fit_power_law(points: Sequence) -> ScalingFit:
    """Least-squares line through (ln eps, ln value).

    ``points`` holds (eps, value) or (eps, value, std_error). Points with
    value <= 0 are dropped; fewer than three survivors is an error.
    """
    pts = [tuple(float(x) for x in p) + ((0.0,) if len(p) == 2 else ()) for p in points]
    if len(pts) < 3:
        raise InsufficientPoints(f"need at least 3 points, got {len(pts)}")
    if any(not (p[0] > 0) for p in pts):
        raise DomainError("all eps must be positive")
    if len({p[0] for p in pts}) != len(pts):
        raise DomainError("eps values must be distinct")
    kept = [p for p in pts if p[1] > 0]
    if len(kept) < 3:
        raise NonpositiveValue(f"only {len(kept)} points with positive value")
    x = np.log([p[0] for p in kept])
    y = np.log([p[1] for p in kept])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float(np.sum(resid**2)) / ss_tot)
    return ScalingFit(float(slope), float(intercept), r2, tuple(kept), len(pts) - len(kept))


@dataclass(frozen=True)
class LojasiewiczEstimate:
    alpha: float
    per_direction: tuple          # ((direction, slope), ...)
    best_direction: tuple
    clamped: bool = False
    skipped: tuple = field(default=())

    @property
    def beta(self) -> float:
        """Companion real exponent, alpha = 2 beta - 1."""
        return (self.alpha + 1) / 2

    def to_dict(self):
        return {"alpha": self.alpha, "beta": self.beta, "best_direction": list(self.best_direction),
                "clamped": self.clamped,
                "per_direction": [{"direction": list(d), "slope": s} for d, s in self.per_direction],
                "skipped": [list(d) for d in self.skipped]}


def _probe_direction(poly, direction, t):
    # real t > 0 keeps each coordinate on the positive real axis
    Z = np.power.outer(t, np.asarray(direction, dtype=float)).astype(np.complex128)
    f = evaluate_many(poly, Z)
    # scale of the individual terms, for detecting identical vanishing
    size = np.zeros(len(t))
    for idx, c in poly.terms:
        size += abs(c) * np.prod(np.abs(Z) ** np.asarray(idx), axis=1)
    absf = np.abs(f)
    if np.all(absf <= 1e-12 * size):
        return None
    g = stable_norm(gradient_many(poly, Z), axis=1)
    ok = (absf > 1e-12 * size) & (absf > 0) & (g > 0)
    if ok.sum() < 3:
        return None
    slope, _ = np.polyfit(np.log(absf[ok]), np.log(g[ok]), 1)
    return float(slope)


def lojasiewicz_curve_probe(poly: SparsePolynomial, a_max: int = 6,
                            t_grid: Optional[Sequence[float]] = None) -> LojasiewiczEstimate:
    """Estimate alpha in |df| >= C |f|^alpha along monomial curves z = t^a.

    For each integer direction a in {1..a_max}^n the slope of ln|df| against
    ln|f| is fitted over ``t_grid``; alpha is the largest slope, clamped to
    [0, 1). Directions lying inside Z(f) are skipped.
    """
    if a_max < 1:
        raise DomainError(f"a_max must be >= 1, got {a_max}")
    t = np.asarray(DEFAULT_T_GRID if t_grid is None else t_grid, dtype=float)
    if t.size < 4 or np.any(t <= 0) or np.any(t > 0.1):
        raise DomainError("t_grid needs >= 4 points in (0, 0.1]")
    if math.log10(t.max() / t.min()) < 4 - 1e-9:
        raise DomainError("t_grid must span at least 4 decades")
    per, skipped = [], []
    for d in itertools.product(range(1, a_max + 1), repeat=poly.dimension):
        s = _probe_direction(poly, d, t)
        if s is None:
            skipped.append(d)
        else:
            per.append((d, s))
    if not per:
        raise AllDirectionsDegenerate("every probe curve lies in Z(f)")
    best = max(s for _, s in per)
    # ties (to rounding) go to the lexicographically smallest direction
    best_dir = min(d for d, s in per if s >= best - 1e-9)
    alpha, clamped = best, False
    if alpha > ALPHA_CEIL:
        warnings.warn(f"fitted alpha {alpha:.4f} above {ALPHA_CEIL}; clamped", RuntimeWarning)
        alpha, clamped = ALPHA_CEIL, True
    alpha = max(alpha, 0.0)
    return LojasiewiczEstimate(float(alpha), tuple(per), tuple(best_dir), clamped, tuple(skipped))


def exponent_report(alpha: float) -> tuple:
    """(gamma, tau, lower bound on the complex singularity exponent)."""
    if not 0 <= alpha < 1:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    gamma = 1.0 - alpha
    return gamma, 2.0 * gamma, gamma
