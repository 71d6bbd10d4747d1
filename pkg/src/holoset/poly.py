"""Sparse complex polynomials on C^n.

A polynomial is an immutable map from multi-indices to complex coefficients,
stored in lexicographic order so that every summation happens in the same
order on every call.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError

MultiIndex = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class SparsePolynomial:
    dimension: int
    terms: tuple = ()  # ((MultiIndex, complex), ...) sorted, no zero coefficients

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionMismatch("dimension must be positive", dimension=self.dimension)
        for idx, c in self.terms:
            if len(idx) != self.dimension:
                raise DimensionMismatch(
                    f"multi-index {idx} has length {len(idx)}, expected {self.dimension}")
            if any(a < 0 for a in idx):
                raise DomainError(f"negative exponent in {idx}")
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DomainError(f"non-finite coefficient {c} at {idx}")

    @classmethod
    def from_terms(cls, dimension: int, terms) -> "SparsePolynomial":
        """Build from a mapping or an iterable of (exponents, coeff); duplicates are summed."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for idx, c in items:
            idx = tuple(int(a) for a in idx)
            if len(idx) != dimension:
                raise DimensionMismatch(
                    f"multi-index {idx} has length {len(idx)}, expected {dimension}")
            acc[idx] = acc.get(idx, 0j) + complex(c)
        kept = tuple((idx, acc[idx]) for idx in sorted(acc) if acc[idx] != 0)
        return cls(dimension, kept)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: complex = 1.0) -> "SparsePolynomial":
        return cls.from_terms(len(exponents), [(tuple(exponents), coeff)])

    # -- structure ---------------------------------------------------------
    def as_dict(self) -> dict:
        return dict(self.terms)

    @property
    def is_constant(self) -> bool:
        return all(sum(idx) == 0 for idx, _ in self.terms)

    @property
    def degree(self) -> int:
        return max((sum(idx) for idx, _ in self.terms), default=0)

    def degree_in(self, j: int) -> int:
        return max((idx[j] for idx, _ in self.terms), default=0)

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def scaled(self, c: complex) -> "SparsePolynomial":
        return SparsePolynomial.from_terms(self.dimension, [(i, c * a) for i, a in self.terms])

    def __add__(self, other):
        if isinstance(other, SparsePolynomial):
            if other.dimension != self.dimension:
                raise DimensionMismatch("cannot add polynomials of different dimension")
            return SparsePolynomial.from_terms(self.dimension, list(self.terms) + list(other.terms))
        return self + SparsePolynomial.from_terms(self.dimension, [((0,) * self.dimension, other)])

    __radd__ = __add__

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other if isinstance(other, SparsePolynomial) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SparsePolynomial):
            return self.scaled(complex(other))
        if other.dimension != self.dimension:
            raise DimensionMismatch("cannot multiply polynomials of different dimension")
        prod = []
        for i, a in self.terms:
            for j, b in other.terms:
                prod.append((tuple(x + y for x, y in zip(i, j)), a * b))
        return SparsePolynomial.from_terms(self.dimension, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative polynomial power")
        out = SparsePolynomial.from_terms(self.dimension, [((0,) * self.dimension, 1.0)])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self, j: int) -> "SparsePolynomial":
        return _derivative(self, j)

    def __str__(self):
        return self.format()

    def format(self, names=None, exact: bool = False) -> str:
        """Shorthand text, highest multi-index first; ``exact`` keeps full float precision."""
        if not self.terms:
            return "0"
        names = names or [f"z{j + 1}" for j in range(self.dimension)]
        num = repr if exact else (lambda x: f"{x:g}")
        parts = []
        for idx, c in reversed(self.terms):
            coeff = num(c.real) if c.imag == 0 else f"({num(c.real)}{'+' if c.imag >= 0 else '-'}{num(abs(c.imag))}i)"
            mono = "*".join(names[j] + (f"^{a}" if a > 1 else "")
                            for j, a in enumerate(idx) if a > 0)
            if not mono:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(mono)
            elif coeff == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- cached numeric views ---------------------------------------------
    @cached_property
    def _exponents(self) -> np.ndarray:
        if not self.terms:
            return np.zeros((0, self.dimension), dtype=np.int64)
        return np.array([idx for idx, _ in self.terms], dtype=np.int64)

    @cached_property
    def _coeffs(self) -> np.ndarray:
        return np.array([c for _, c in self.terms], dtype=np.complex128)

    @cached_property
    def _gradient_polys(self) -> tuple:
        return tuple(self.derivative(j) for j in range(self.dimension))

    @cached_property
    def _hessian_polys(self) -> tuple:
        g = self._gradient_polys
        return tuple(tuple(g[i].derivative(j) for j in range(self.dimension))
                     for i in range(self.dimension))


def _derivative(poly: SparsePolynomial, j: int) -> SparsePolynomial:
    if not 0 <= j < poly.dimension:
        raise DimensionMismatch(f"coordinate {j} out of range for dimension {poly.dimension}")
    out = []
    for idx, c in poly.terms:
        if idx[j] > 0:
            new = list(idx)
            new[j] -= 1
            out.append((tuple(new), c * idx[j]))
    return SparsePolynomial.from_terms(poly.dimension, out)


# ---------------------------------------------------------------------------
# Vectorised evaluation. Points are arrays of shape (N, n).

def _as_points(poly: SparsePolynomial, points) -> np.ndarray:
    z = np.asarray(points, dtype=np.complex128)
    if z.ndim == 1:
        z = z[None, :]
    if z.ndim != 2 or z.shape[1] != poly.dimension:
        raise DimensionMismatch(
            f"points have shape {z.shape}, expected (N, {poly.dimension})")
    return z


def _power_tables(z: np.ndarray, max_exp: np.ndarray) -> list:
    tables = []
    for j in range(z.shape[1]):
        t = np.empty((int(max_exp[j]) + 1, z.shape[0]), dtype=np.complex128)
        t[0] = 1.0
        for k in range(1, t.shape[0]):
            t[k] = t[k - 1] * z[:, j]
        tables.append(t)
    return tables


def _eval_with_tables(poly: SparsePolynomial, tables: list, n_points: int) -> np.ndarray:
    out = np.zeros(n_points, dtype=np.complex128)
    for (idx, c) in poly.terms:
        term = np.full(n_points, c, dtype=np.complex128)
        for j, a in enumerate(idx):
            if a:
                term = term * tables[j][a]
        out += term
    return out


def evaluate_many(poly: SparsePolynomial, points) -> np.ndarray:
    z = _as_points(poly, points)
    if not poly.terms:
        return np.zeros(z.shape[0], dtype=np.complex128)
    tables = _power_tables(z, poly._exponents.max(axis=0))
    return _eval_with_tables(poly, tables, z.shape[0])


def gradient_many(poly: SparsePolynomial, points) -> np.ndarray:
    """Wirtinger gradient, shape (N, n)."""
    z = _as_points(poly, points)
    out = np.zeros(z.shape, dtype=np.complex128)
    if not poly.terms:
        return out
    tables = _power_tables(z, poly._exponents.max(axis=0))
    for j, dp in enumerate(poly._gradient_polys):
        out[:, j] = _eval_with_tables(dp, tables, z.shape[0])
    return out


def hessian_many(poly: SparsePolynomial, points) -> np.ndarray:
    """Complex Hessian d^2 f / dz_i dz_j, shape (N, n, n)."""
    z = _as_points(poly, points)
    n = poly.dimension
    out = np.zeros((z.shape[0], n, n), dtype=np.complex128)
    if not poly.terms:
        return out
    tables = _power_tables(z, poly._exponents.max(axis=0))
    for i in range(n):
        for j in range(i, n):
            val = _eval_with_tables(poly._hessian_polys[i][j], tables, z.shape[0])
            out[:, i, j] = val
            out[:, j, i] = val
    return out


def stable_norm(v: np.ndarray, axis=-1) -> np.ndarray:
    """Euclidean norm along ``axis`` without intermediate under/overflow."""
    a = np.abs(v)
    m = a.max(axis=axis, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    s = np.sqrt(np.sum((a / safe) ** 2, axis=axis, keepdims=True)) * m
    return np.squeeze(s, axis=axis)


def hessian_frobenius_many(poly: SparsePolynomial, points) -> np.ndarray:
    h = hessian_many(poly, points)
    return stable_norm(h.reshape(h.shape[0], -1))


# ---------------------------------------------------------------------------
# Single-point API

def evaluate(poly: SparsePolynomial, point) -> complex:
    """Value of ``poly`` at one point."""
    return complex(evaluate_many(poly, _single(poly, point))[0])


def gradient(poly: SparsePolynomial, point) -> tuple:
    """Return ``(grad, norm)``: the Wirtinger gradient and its Euclidean norm."""
    g = gradient_many(poly, _single(poly, point))[0]
    return g, float(stable_norm(g))


def hessian_frobenius(poly: SparsePolynomial, point) -> float:
    """Frobenius norm of the complex Hessian at one point."""
    return float(hessian_frobenius_many(poly, _single(poly, point))[0])


def _single(poly, point):
    z = np.asarray(point, dtype=np.complex128).reshape(-1)
    if z.shape[0] != poly.dimension:
        raise DimensionMismatch(
            f"point has length {z.shape[0]}, polynomial dimension is {poly.dimension}")
    return z[None, :]


# ---------------------------------------------------------------------------
# Domains

class DomainKind(str, enum.Enum):
    POLYDISC = "polydisc"
    BALL = "ball"


@dataclass(frozen=True)
class PolyDomain:
    kind: DomainKind = DomainKind.POLYDISC
    radii: tuple = (1.0,)  # per coordinate for POLYDISC; one entry for BALL
    dimension: int = 2

    def __post_init__(self):
        object.__setattr__(self, "kind", DomainKind(self.kind))
        radii = tuple(float(r) for r in self.radii)
        if self.kind is DomainKind.POLYDISC and len(radii) == 1:
            radii = radii * self.dimension
        object.__setattr__(self, "radii", radii)
        if any(not r > 0 for r in radii):
            raise DomainError("domain radii must be positive", radii=radii)
        if self.kind is DomainKind.POLYDISC and len(radii) != self.dimension:
            raise DimensionMismatch("polydisc needs one radius per coordinate")
        if self.kind is DomainKind.BALL and len(radii) != 1:
            raise DimensionMismatch("ball takes a single radius")

    @classmethod
    def polydisc(cls, dimension: int, radius=1.0):
        radii = (radius,) * dimension if np.isscalar(radius) else tuple(radius)
        return cls(DomainKind.POLYDISC, radii, dimension)

    @classmethod
    def ball(cls, dimension: int, radius: float = 1.0):
        return cls(DomainKind.BALL, (radius,), dimension)

    @property
    def box_radii(self) -> tuple:
        """Radii of the smallest polydisc containing the domain."""
        if self.kind is DomainKind.BALL:
            return self.radii * self.dimension
        return self.radii

    @property
    def volume(self) -> float:
        if self.kind is DomainKind.BALL:
            r = self.radii[0]
            return math.pi ** self.dimension * r ** (2 * self.dimension) / math.factorial(self.dimension)
        return math.prod(math.pi * r * r for r in self.radii)

    @property
    def box_volume(self) -> float:
        return math.prod(math.pi * r * r for r in self.box_radii)

    def contains(self, z: np.ndarray) -> np.ndarray:
        if self.kind is DomainKind.BALL:
            return np.sum(np.abs(z) ** 2, axis=1) < self.radii[0] ** 2
        return np.all(np.abs(z) < np.asarray(self.radii), axis=1)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "radii": list(self.radii), "dimension": self.dimension}


def cusp(p: int = 2, q: int = 3) -> SparsePolynomial:
    """z1^p - z2^q."""
    return SparsePolynomial.from_terms(2, [((p, 0), 1.0), ((0, q), -1.0)])
