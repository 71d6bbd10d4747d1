"""Point blow-up of C^2 at the origin, with the cusp z1^2 - z2^3 as the worked subject.

Chart 1 has coordinates (z1, t) and maps to (z1, z1 t); chart 2 has (s, z2)
and maps to (z2 s, z2). Pullbacks are computed by exponent arithmetic, so
the factorization works for any polynomial in two variables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import DimensionMismatch, DomainError
from .poly import SparsePolynomial, cusp, evaluate_many

CHECK_POINTS = 1000


@dataclass(frozen=True)
class BlowupChart:
    chart_id: int

    def __post_init__(self):
        if self.chart_id not in (1, 2):
            raise DomainError(f"chart_id must be 1 or 2, got {self.chart_id}")

    @property
    def divisor_index(self) -> int:
        """Index of the chart coordinate cutting out the exceptional divisor (= the Jacobian)."""
        return 0 if self.chart_id == 1 else 1

    @property
    def coordinate_names(self) -> tuple:
        return ("z1", "t") if self.chart_id == 1 else ("s", "z2")

    def pull_exponent(self, idx) -> tuple:
        """Exponents in chart coordinates of the pullback of z1^i z2^j."""
        i, j = idx
        return (i + j, j) if self.chart_id == 1 else (i, i + j)


def chart_map(chart: BlowupChart, coords) -> np.ndarray:
    """Ambient point(s) of chart coordinates; accepts shape (2,) or (N, 2)."""
    c = np.asarray(coords, dtype=np.complex128)
    if c.shape[-1] != 2:
        raise DimensionMismatch("chart coordinates are pairs")
    c1, c2 = c[..., 0], c[..., 1]
    if chart.chart_id == 1:
        return np.stack([c1, c1 * c2], axis=-1)
    return np.stack([c2 * c1, c2], axis=-1)


def jacobian(chart: BlowupChart, coords):
    """det D(pi): c1 in chart 1, c2 in chart 2."""
    c = np.asarray(coords, dtype=np.complex128)
    return c[..., chart.divisor_index]


def pullback(chart: BlowupChart, poly: SparsePolynomial) -> SparsePolynomial:
    if poly.dimension != 2:
        raise DimensionMismatch("blow-up charts act on C^2")
    return SparsePolynomial.from_terms(2, [(chart.pull_exponent(i), c) for i, c in poly.terms])


def _chart_points(seed: int, chart_id: int, n: int = CHECK_POINTS) -> np.ndarray:
    # uniform on the unit bidisc in chart coordinates
    U = rng.uniforms(seed, 0, n, 4, stream=chart_id)
    r = np.sqrt(U[:, [0, 2]])
    return r * np.exp(2j * math.pi * U[:, [1, 3]])


def pullback_factorization(chart: BlowupChart, poly: SparsePolynomial = None, seed: int = 0) -> tuple:
    """(exceptional exponent m, strict transform, max residual).

    The pullback equals d^m times the strict transform, d the divisor
    coordinate; the residual is max |f(pi(c)) - d^m strict(c)| over 1000
    seeded chart points in the unit bidisc.
    """
    poly = cusp() if poly is None else poly
    pb = pullback(chart, poly)
    k = chart.divisor_index
    m = min(idx[k] for idx, _ in pb.terms)
    strict = SparsePolynomial.from_terms(
        2, [(tuple(e - m if q == k else e for q, e in enumerate(idx)), c) for idx, c in pb.terms])
    C = _chart_points(seed, chart.chart_id)
    lhs = evaluate_many(poly, chart_map(chart, C))
    rhs = C[:, k] ** m * evaluate_many(strict, C)
    return m, strict, float(np.max(np.abs(lhs - rhs)))


def chart_overlap_residual(seed: int = 0, n: int = CHECK_POINTS) -> float:
    """max |pi_1(z1, t) - pi_2(1/t, z1 t)| over random overlap points."""
    C = _chart_points(seed, 3, n)
    C = C[np.abs(C[:, 1]) > 1e-3]
    z1, t = C[:, 0], C[:, 1]
    p1 = chart_map(BlowupChart(1), np.stack([z1, t], axis=1))
    p2 = chart_map(BlowupChart(2), np.stack([1 / t, z1 * t], axis=1))
    return float(np.max(np.abs(p1 - p2)))


def pullback_second_derivative(z1: complex, t: complex, poly: SparsePolynomial = None) -> complex:
    """d^2/dz1^2 of the chart-1 pullback at (z1, t)."""
    poly = cusp() if poly is None else poly
    d2 = pullback(BlowupChart(1), poly).derivative(0).derivative(0)
    return complex(evaluate_many(d2, np.array([[z1, t]], dtype=np.complex128))[0])


def strict_transform_min_gradient(chart: BlowupChart = BlowupChart(2), poly: SparsePolynomial = None,
                                  n_grid: int = 201) -> float:
    """Smallest |grad| of the strict transform along its zero set on a grid of the free coordinate.

    For the cusp in chart 2 the strict transform is s^2 - z2, whose zero set
    is the graph z2 = s^2; the grid runs over s in [-1, 1] + i[-1, 1].
    """
    _, strict, _ = pullback_factorization(chart, poly)
    x = np.linspace(-1, 1, n_grid)
    s = (x[:, None] + 1j * x[None, :]).ravel()
    # solve for the divisor coordinate on the zero set (linear in it for the cusp)
    k = chart.divisor_index
    other = 1 - k
    if strict.degree_in(k) != 1:
        raise DomainError("strict transform is not a graph over the free coordinate")
    drop = lambda i: tuple(0 if q == k else e for q, e in enumerate(i))  # noqa: E731
    a1 = SparsePolynomial.from_terms(2, [(drop(i), c) for i, c in strict.terms if i[k] == 1])
    a0 = SparsePolynomial.from_terms(2, [(i, c) for i, c in strict.terms if i[k] == 0])
    P = np.zeros((len(s), 2), dtype=np.complex128)
    P[:, other] = s
    P[:, k] = -evaluate_many(a0, P) / evaluate_many(a1, P)
    g = np.stack([evaluate_many(strict.derivative(q), P) for q in range(2)], axis=1)
    return float(np.min(np.linalg.norm(g, axis=1)))


def resolved_A1_model_integral(delta: float) -> float:
    """int_0^delta dr / (r |ln r| (ln|ln r|)^2) = 1 / ln(ln(1/delta))."""
    if not 0 < delta < math.exp(-1):
        raise DomainError(f"delta must lie in (0, 1/e), got {delta}")
    return 1.0 / math.log(math.log(1.0 / delta))
