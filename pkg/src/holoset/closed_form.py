"""Exact and asymptotic level-set integrals for monomials on polydiscs.

These are the reference values the Monte-Carlo estimators are checked
against. Everything is on the unit polydisc.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import DomainError, OutsideBase

PI = math.pi


def _check_eps(eps, upper_inclusive=True):
    ok = 0 < eps <= 1 if upper_inclusive else 0 < eps < 1
    if not ok:
        raise DomainError(f"eps={eps} outside {'(0,1]' if upper_inclusive else '(0,1)'}")


def _check_kl(k, l):
    if int(k) != k or int(l) != l or k < 1 or l < 1:
        raise DomainError(f"exponents must be positive integers, got ({k}, {l})")


def monomial_I_exact_n2(k: int, l: int, eps: float) -> float:
    """Weighted level-set area  I(eps) = int_{|z1^k z2^l| = eps} |df| dS  on the bidisc."""
    _check_kl(k, l)
    _check_eps(eps)
    return 2 * PI**2 * eps * (k * (1 - eps ** (2 / l)) + l * (1 - eps ** (2 / k)))


def monomial_J_exact_n2(k: int, l: int, eps: float) -> float:
    """Sublevel energy  J(eps) = int_{|z1^k z2^l| < eps} |df|^2 dV  on the bidisc."""
    _check_kl(k, l)
    _check_eps(eps)
    return (2 * PI) ** 2 * ((k + l) / 4 * eps**2
                            - k * l / (4 * (l + 1)) * eps ** (2 + 2 / l)
                            - k * l / (4 * (k + 1)) * eps ** (2 + 2 / k))


def monomial_I_leading(exponents: Sequence[int]) -> float:
    """Leading constant c in I(eps) ~ c*eps for z^A on the unit polydisc, all k_j >= 1.

    Zero exponents must be stripped by the caller (each stripped coordinate
    contributes a factor pi for its disc).
    """
    ks = list(exponents)
    if not ks:
        raise DomainError("empty exponent vector")
    if any(int(k) != k or k < 1 for k in ks):
        raise DomainError(f"all exponents must be positive integers, got {ks}")
    return 2 * PI ** len(ks) * sum(ks)


def lemma_integral_limit(alphas: Sequence[float]) -> float:
    """Limit as eps -> 0 of  int_{u in (0,1]^m, prod u >= eps} prod u_i^alpha_i du."""
    if any(not a > -1 for a in alphas):
        raise DomainError(f"every alpha must exceed -1, got {list(alphas)}")
    return float(np.prod([1.0 / (a + 1) for a in alphas]))


# -- exponential polynomials ------------------------------------------------
# A function sum_k P_k(L) exp(-c_k L), stored as {c_k: [p0, p1, ...]} with
# exact rational coefficients. Convolving with exp(-beta x) on [0, L] keeps
# the family closed, which gives the simplex integral exactly.

def _convolve_exp(func: dict, beta: Fraction) -> dict:
    out: dict = {}

    def add(rate, power, coef):
        poly = out.setdefault(rate, [])
        while len(poly) <= power:
            poly.append(Fraction(0))
        poly[power] += coef

    for c, poly in func.items():
        for k, p in enumerate(poly):
            if p == 0:
                continue
            if c == beta:
                # int_0^L e^{-c L} (L-x)^k dx  with equal rates
                add(c, k + 1, p / (k + 1))
                continue
            d = beta - c
            # e^{-cL} sum_i (-1)^i k!/(k-i)! L^{k-i} / d^{i+1}  -  (-1)^k k!/d^{k+1} e^{-beta L}
            for i in range(k + 1):
                coef = Fraction((-1) ** i * math.factorial(k), math.factorial(k - i)) / d ** (i + 1)
                add(c, k - i, p * coef)
            add(beta, 0, -p * Fraction((-1) ** k * math.factorial(k)) / d ** (k + 1))
    return out


def lemma_integral_finite(alphas: Sequence[float], eps: float) -> float:
    """Exact  int_{u in (0,1]^m, prod u >= eps} prod u_i^alpha_i du.

    With u_i = exp(-x_i) the region becomes the simplex sum x_i <= L,
    L = -log(eps), and the integrand exp(-sum beta_i x_i), beta_i = alpha_i+1.
    The simplex integral is built one coordinate at a time as an
    exponential polynomial in L with rational coefficients, then evaluated
    in extended precision.
    """
    if any(not a > -1 for a in alphas):
        raise DomainError(f"every alpha must exceed -1, got {list(alphas)}")
    _check_eps(eps, upper_inclusive=False)
    func = {Fraction(0): [Fraction(1)]}
    for a in alphas:
        func = _convolve_exp(func, Fraction(a) + 1)
    with mpmath.workdps(60):
        L = -mpmath.log(mpmath.mpf(eps))
        total = mpmath.mpf(0)
        for c, poly in sorted(func.items()):
            c_mp = mpmath.mpf(c.numerator) / c.denominator
            pv = mpmath.mpf(0)
            for k in reversed(range(len(poly))):
                pv = pv * L + mpmath.mpf(poly[k].numerator) / poly[k].denominator
            total += pv * mpmath.exp(-c_mp * L)
        return float(total)


def fiber_volume_z1z2_exact(w_abs: float) -> float:
    """Area of {z1 z2 = w} inside the unit bidisc."""
    if not 0 <= w_abs < 1:
        raise DomainError(f"|w|={w_abs} outside [0,1)")
    return 2 * PI * (1 - w_abs**2)


def monomial_sublevel_volume_exact(k: int, l: int, eps: float) -> float:
    """Vol{ z in unit bidisc : |z1^k z2^l| < eps }.

    With u = r1^k, v = r2^l the complement {uv >= eps} carries the density
    u^(a-1) v^(b-1), a = 2/k, b = 2/l, which integrates in closed form.
    """
    _check_kl(k, l)
    _check_eps(eps)
    a, b = 2 / k, 2 / l
    if k == l:
        cross = -(eps**b) * math.log(eps)
    else:
        cross = (eps**b - eps**a) / (a - b)
    upper = ((1 - eps**a) / a - cross) / b
    return PI**2 - (2 * PI) ** 2 / (k * l) * upper


def graph_volume_integrand(exponents: Sequence[int], w: complex, zprime) -> float:
    """Area density of the fiber {z^A = w} viewed as a graph over z' = (z1..z_{n-1}).

    All a_n sheets are counted. Raises OutsideBase unless |P(z')| > |w| and
    z' lies in the unit polydisc.
    """
    a = [int(x) for x in exponents]
    if a[-1] < 1:
        raise DomainError("last exponent must be >= 1")
    zp = np.atleast_1d(np.asarray(zprime, dtype=np.complex128))
    if zp.shape[0] != len(a) - 1:
        raise DomainError(f"z' must have length {len(a) - 1}")
    val = graph_volume_integrand_many(a, w, zp[None, :])[0]
    if np.isnan(val):
        raise OutsideBase(f"|P(z')| <= |w| or z' outside the polydisc at z'={zp.tolist()}")
    return float(val)


def graph_volume_integrand_many(a: Sequence[int], w: complex, zp: np.ndarray) -> np.ndarray:
    """Vectorised integrand; NaN marks points outside the admissible base."""
    a = np.asarray(a, dtype=float)
    an = a[-1]
    absz = np.abs(zp)
    with np.errstate(divide="ignore", invalid="ignore"):
        active = a[:-1] > 0
        logP = np.sum(a[:-1][active] * np.log(absz[:, active]), axis=1)
        inside = (logP > math.log(abs(w))) & np.all(absz < 1, axis=1)
        # |z_n|^2 = |w/P|^(2/a_n)
        zn2 = np.exp(2.0 / an * (math.log(abs(w)) - logP))
        ratio = np.sum((a[:-1][active] ** 2) / an**2 / absz[:, active] ** 2, axis=1)
        val = an * (1.0 + zn2 * ratio)
    return np.where(inside, val, np.nan)
