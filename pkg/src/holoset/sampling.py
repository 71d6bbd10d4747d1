"""Sampling proposals on polydiscs.

Every proposal maps a block of uniforms of fixed width to points in C^n
and, for the importance-sampling proposals, the log-density of those
points with respect to Lebesgue measure on R^{2n}. The fixed width keeps the
per-sample counter layout independent of which branch a sample takes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import SparsePolynomial, evaluate_many

TWO_PI = 2.0 * math.pi
FAR_ROOT = 1e10  # stand-in for roots lost to a vanishing leading coefficient


def _disc_uniform(R, u_r, u_t):
    return R * np.sqrt(u_r) * np.exp(1j * TWO_PI * u_t)


@dataclass(frozen=True)
class UniformProposal:
    """Uniform on the polydisc with the given radii. Density is constant."""

    radii: tuple

    @property
    def width(self) -> int:
        return 2 * len(self.radii)

    @property
    def volume(self) -> float:
        return float(np.prod([math.pi * r * r for r in self.radii]))

    def draw(self, U: np.ndarray) -> np.ndarray:
        cols = [_disc_uniform(R, U[:, 2 * j], U[:, 2 * j + 1]) for j, R in enumerate(self.radii)]
        return np.stack(cols, axis=1)


# -- one-coordinate radial mixtures -------------------------------------------
# A point is r e^{i theta} with x = -ln(r/R). With probability w_uniform it is
# uniform on the disc, otherwise x follows a heavy-tailed law. The area
# density of the log part is p_x(x) / (2 pi r^2).

@dataclass(frozen=True)
class RadialLaw:
    R: float
    kind: str = "lomax"          # "lomax" (x in [0, inf)) or "loguniform" (r in [r_lo, R])
    scale: float = 1.0           # Lomax scale s, p(x) = s / (s + x)^2
    r_lo: float = 0.0            # inner radius for the log-uniform law
    w_uniform: float = 0.5

    def sample(self, u_c, u_r, u_t):
        R = self.R
        if self.kind == "lomax":
            x = self.scale * u_r / (1.0 - u_r)
        else:
            x = u_r * math.log(R / self.r_lo)
        r_log = R * np.exp(-x)
        r_uni = R * np.sqrt(u_r)
        r = np.where(u_c < self.w_uniform, r_uni, r_log)
        return r * np.exp(1j * TWO_PI * u_t)

    def log_density(self, z):
        R = self.R
        r = np.abs(z)
        inside = r < R
        log_uni = math.log(self.w_uniform / (math.pi * R * R)) if self.w_uniform > 0 else -math.inf
        if self.w_uniform >= 1.0:
            return np.where(inside, log_uni, -np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            ln_r = np.log(r)
            x = math.log(R) - ln_r
            if self.kind == "lomax":
                log_px = math.log(self.scale) - 2 * np.log(self.scale + x)
            else:
                lam = math.log(R / self.r_lo)
                log_px = np.where(r >= self.r_lo, -math.log(lam), -np.inf)
            log_q = math.log((1.0 - self.w_uniform) / TWO_PI) + log_px - 2 * ln_r
            log_q = np.where(np.isnan(log_q), -np.inf, log_q)
        out = np.logaddexp(log_uni, log_q)
        return np.where(inside, out, -np.inf)


@dataclass(frozen=True)
class RadialProposal:
    """Independent radial mixtures per coordinate, concentrating near the axes."""

    laws: tuple

    @property
    def width(self) -> int:
        return 3 * len(self.laws)

    def draw(self, U):
        cols = [law.sample(U[:, 3 * j], U[:, 3 * j + 1], U[:, 3 * j + 2])
                for j, law in enumerate(self.laws)]
        Z = np.stack(cols, axis=1)
        log_q = np.zeros(len(U))
        for j, law in enumerate(self.laws):
            log_q = log_q + law.log_density(Z[:, j])
        return Z, log_q


def lomax_proposal(radii, w_uniform=0.5) -> RadialProposal:
    # Scale |ln R| makes the weight for 1/(r^2 ln^2 r)-type integrands flat.
    laws = tuple(RadialLaw(R, "lomax", max(-math.log(R), 0.5), 0.0, w_uniform) for R in radii)
    return RadialProposal(laws)


def loguniform_proposal(radii, r_lo, w_uniform=0.2) -> RadialProposal:
    laws = tuple(RadialLaw(R, "loguniform", 1.0, min(lo, R / 2), w_uniform)
                 for R, lo in zip(radii, r_lo))
    return RadialProposal(laws)


# -- root-adapted proposal ------------------------------------------------------

def solve_coordinate(poly: SparsePolynomial) -> int:
    """Coordinate of smallest positive degree; ties go to the last one."""
    degs = [poly.degree_in(j) for j in range(poly.dimension)]
    best = min(d for d in degs if d > 0)
    return max(j for j, d in enumerate(degs) if d == best)


def _univariate_coeffs(poly: SparsePolynomial, k: int, Zp: np.ndarray) -> np.ndarray:
    """Coefficients (N, d+1), lowest first, of f(z', .) in coordinate k."""
    d = poly.degree_in(k)
    N = Zp.shape[0]
    C = np.zeros((N, d + 1), dtype=np.complex128)
    for m in range(d + 1):
        terms = {}
        for idx, c in poly.terms:
            if idx[k] == m:
                rest = idx[:k] + (0,) + idx[k + 1:]
                terms[rest] = terms.get(rest, 0) + c
        if terms:
            sub = SparsePolynomial.from_terms(poly.dimension, terms)
            C[:, m] = evaluate_many(sub, Zp)
    return C


def batched_roots(C: np.ndarray) -> np.ndarray:
    """All d roots per row of (N, d+1) coefficients; non-finite roots become FAR_ROOT."""
    N, d1 = C.shape
    d = d1 - 1
    with np.errstate(all="ignore"):
        if d == 1:
            roots = (-C[:, 0] / C[:, 1])[:, None]
        elif d == 2:
            a, b, c = C[:, 2], C[:, 1], C[:, 0]
            disc = np.sqrt(b * b - 4 * a * c)
            # pick the sign avoiding cancellation
            s = np.where((np.conj(b) * disc).real >= 0, 1.0, -1.0)
            qq = -0.5 * (b + s * disc)
            roots = np.stack([qq / a, c / qq], axis=1)
            # qq = 0 needs b = 0 and ac = 0: c = 0 is a double root at the origin,
            # a = 0 leaves a nonzero constant with no roots
            roots[(qq == 0) & (c == 0)] = 0.0
            roots[(qq == 0) & (c != 0)] = FAR_ROOT
        else:
            lead = C[:, -1]
            ok = np.abs(lead) > 0
            M = np.zeros((N, d, d), dtype=np.complex128)
            M[:, 1:, :-1] = np.eye(d - 1)
            safe = np.where(ok, lead, 1.0)
            M[:, :, -1] = -C[:, :-1] / safe[:, None]
            M[~ok] = 0.0
            good = np.all(np.isfinite(M.reshape(N, -1)), axis=1)
            M[~good] = 0.0
            roots = np.linalg.eigvals(M)
            roots[~(ok & good)] = FAR_ROOT
    roots = np.where(np.isfinite(roots), roots, FAR_ROOT)
    return roots


@dataclass(frozen=True)
class RootAdaptedProposal:
    """Concentrates samples near Z(f) for a level band {a <= |f| < b}.

    Coordinates other than the solve coordinate come from a log-uniform
    radial mixture (uniform if f does not depend on them). The solve
    coordinate is drawn, given z', from a mixture of the uniform disc and
    log-uniform annuli of radii [rho_lo, rho_hi] around the roots of
    f(z', .), so every dyadic band near every branch gets comparable mass.
    """

    poly: SparsePolynomial
    radii: tuple
    a: float
    w_uniform: float = 0.1

    @property
    def k(self) -> int:
        return solve_coordinate(self.poly)

    @property
    def width(self) -> int:
        return 3 * (len(self.radii) - 1) + 4

    def _others(self):
        k = self.k
        out = []
        for j, R in enumerate(self.radii):
            if j == k:
                continue
            if self.poly.degree_in(j) > 0:
                out.append((j, RadialLaw(R, "loguniform", 1.0, min(self.a / 2, R / 2), 0.2)))
            else:
                out.append((j, RadialLaw(R, "lomax", 1.0, 0.0, 1.0)))  # pure uniform
        return out

    def _rho_range(self):
        k = self.k
        Rk = self.radii[k]
        # crude bound on |d f / d z_k| over the box
        D = 0.0
        for idx, c in self.poly.terms:
            if idx[k] > 0:
                D += abs(c) * idx[k] * np.prod([R ** e for R, e in zip(self.radii, idx)]) / Rk
        D = max(D, 1e-300)
        return self.a / (4 * D), 2 * Rk

    def draw(self, U):
        N = U.shape[0]
        n = len(self.radii)
        k = self.k
        Z = np.zeros((N, n), dtype=np.complex128)
        log_q = np.zeros(N)
        col = 0
        for j, law in self._others():
            Z[:, j] = law.sample(U[:, col], U[:, col + 1], U[:, col + 2])
            log_q = log_q + law.log_density(Z[:, j])
            col += 3
        u_c, u_k, u_r, u_t = (U[:, col + i] for i in range(4))
        roots = batched_roots(_univariate_coeffs(self.poly, k, Z))
        K = roots.shape[1]
        rho_lo, rho_hi = self._rho_range()
        lam = math.log(rho_hi / rho_lo)
        Rk = self.radii[k]
        pick = np.minimum((u_k * K).astype(np.int64), K - 1)
        centre = roots[np.arange(N), pick]
        rho = rho_lo * np.exp(u_r * lam)
        z_root = centre + rho * np.exp(1j * TWO_PI * u_t)
        z_uni = _disc_uniform(Rk, u_r, u_t)
        Z[:, k] = np.where(u_c < self.w_uniform, z_uni, z_root)
        # conditional density of z_k
        dist = np.abs(Z[:, k][:, None] - roots)
        with np.errstate(divide="ignore", invalid="ignore"):
            band = (dist >= rho_lo) & (dist <= rho_hi)
            comp = np.where(band, 1.0 / (TWO_PI * dist * dist * lam), 0.0)
            qk = self.w_uniform / (math.pi * Rk * Rk) + (1.0 - self.w_uniform) * comp.sum(axis=1) / K
            return Z, log_q + np.log(qk)
