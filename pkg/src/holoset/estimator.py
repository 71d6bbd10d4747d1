"""Seeded, partitionable Monte-Carlo estimators.

Samples are processed in fixed chunks of ``CHUNK`` indices. A chunk's
uniforms depend only on (seed, stream, chunk index), each worker owns a
contiguous run of chunks, and per-chunk statistics are folded in chunk
order, so results do not depend on the worker count.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import rng
from .closed_form import graph_volume_integrand_many
from .errors import BadConfig, ConstantPoly, DegenerateShell, NormalizationError
from .poly import (DomainKind, PolyDomain, SparsePolynomial, evaluate_many, gradient_many,
                   hessian_frobenius_many, stable_norm)
from .sampling import (RootAdaptedProposal, UniformProposal, loguniform_proposal,
                       lomax_proposal)
from .singular import Integrand

CHUNK = 1 << 16
F_FLOOR = 1e-300
LOGLOG_SUP = math.exp(-0.5)


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    n_samples: int = 100_000
    n_workers: int = 1
    domain: Optional[PolyDomain] = None   # None: unit polydisc of the subject's dimension
    low_discrepancy: bool = False
    stream: int = 0

    def __post_init__(self):
        if not (isinstance(self.seed, (int, np.integer)) and 0 <= self.seed < 2**64):
            raise BadConfig(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 1000:
            raise BadConfig(f"n_samples must be an integer >= 1000, got {self.n_samples!r}")
        if int(self.n_workers) != self.n_workers or self.n_workers < 1:
            raise BadConfig(f"n_workers must be >= 1, got {self.n_workers!r}")
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "n_workers", int(self.n_workers))

    def resolve_domain(self, dimension: int) -> PolyDomain:
        if self.domain is None:
            return PolyDomain.polydisc(dimension)
        if self.domain.dimension != dimension:
            raise BadConfig(f"domain dimension {self.domain.dimension} != polynomial dimension {dimension}")
        return self.domain

    def to_dict(self, dimension: Optional[int] = None) -> dict:
        dom = self.domain if self.domain is not None or dimension is None else PolyDomain.polydisc(dimension)
        return {"seed": int(self.seed), "n_samples": self.n_samples, "n_workers": self.n_workers,
                "domain": None if dom is None else dom.to_dict(),
                "low_discrepancy": self.low_discrepancy, "stream": self.stream}


@dataclass(frozen=True)
class EstimateResult:
    value: float
    std_error: float
    n_used: int
    n_rejected: int
    low_discrepancy: bool = False

    def to_dict(self) -> dict:
        return {"value": self.value, "std_error": self.std_error, "n_used": self.n_used,
                "n_rejected": self.n_rejected, "low_discrepancy": self.low_discrepancy}


@dataclass(frozen=True)
class ShellSpec:
    eps: float
    half_width: Optional[float] = None   # default eps / 20

    def __post_init__(self):
        if not self.eps > 0:
            raise BadConfig(f"shell level must be > 0, got {self.eps}")
        if self.half_width is None:
            object.__setattr__(self, "half_width", self.eps / 20)
        if not 0 < self.half_width < self.eps:
            raise BadConfig(f"need 0 < half_width < eps, got {self.half_width}")


class Weight(str, enum.Enum):
    UNIT = "UNIT"
    GRAD_F = "GRAD_F"
    CUSTOM = "CUSTOM"


class RegionKind(str, enum.Enum):
    DOMAIN = "DOMAIN"
    BALL = "BALL"
    ANNULUS = "ANNULUS"


@dataclass(frozen=True)
class RegionSpec:
    kind: RegionKind = RegionKind.DOMAIN
    radius: Optional[float] = None       # BALL: Euclidean radius about the origin
    a: Optional[float] = None            # ANNULUS: a <= |f| < b
    b: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", RegionKind(self.kind))
        if self.kind is RegionKind.BALL and not (self.radius and self.radius > 0):
            raise BadConfig("BALL region needs radius > 0")
        if self.kind is RegionKind.ANNULUS and not (self.a is not None and self.b is not None and 0 < self.a < self.b):
            raise BadConfig("ANNULUS region needs 0 < a < b")

    @classmethod
    def domain(cls):
        return cls(RegionKind.DOMAIN)

    @classmethod
    def ball(cls, radius):
        return cls(RegionKind.BALL, radius=radius)

    @classmethod
    def annulus(cls, a, b):
        return cls(RegionKind.ANNULUS, a=a, b=b)

    def to_dict(self):
        return {"kind": self.kind.value, "radius": self.radius, "a": self.a, "b": self.b}


# -- engine -------------------------------------------------------------------

@dataclass
class _Stats:
    n: int = 0
    mean: float = 0.0
    m2: float = 0.0
    rejected: int = 0
    hits: int = 0

    @classmethod
    def of(cls, vals: np.ndarray, rejected: int, hits: int) -> "_Stats":
        n = len(vals)
        if n == 0:
            return cls(0, 0.0, 0.0, rejected, hits)
        mean = math.fsum(vals) / n
        m2 = math.fsum((vals - mean) ** 2)
        return cls(n, mean, m2, rejected, hits)

    def merge(self, o: "_Stats") -> "_Stats":
        n = self.n + o.n
        if n == 0:
            return _Stats(0, 0.0, 0.0, self.rejected + o.rejected, self.hits + o.hits)
        d = o.mean - self.mean
        mean = self.mean + d * o.n / n
        m2 = self.m2 + o.m2 + d * d * self.n * o.n / n
        return _Stats(n, mean, m2, self.rejected + o.rejected, self.hits + o.hits)


Kernel = Callable[[np.ndarray], tuple]


def run_kernel(cfg: SamplerConfig, width: int, kernel: Kernel, factor: float = 1.0,
               rejected_in_values: bool = False):
    """Evaluate ``kernel`` over all chunks; returns (EstimateResult, hit count).

    ``kernel(U)`` maps uniforms of shape (m, width) to (values, number
    rejected, number of "hits"). The estimate is ``factor * mean(values)``.
    Normally rejected samples are absent from ``values``; with
    ``rejected_in_values`` they are present as zeros (importance sampling,
    where dropping them would bias the mean upward).
    """
    n_chunks = math.ceil(cfg.n_samples / CHUNK)
    draw = rng.sobol_uniforms if cfg.low_discrepancy else rng.uniforms

    def do_chunk(c):
        start = int(c) * CHUNK
        count = min(CHUNK, cfg.n_samples - start)
        U = draw(cfg.seed, start, count, width, cfg.stream)
        vals, rejected, hits = kernel(U)
        return _Stats.of(np.asarray(vals, dtype=np.float64), int(rejected), int(hits))

    def do_range(chunks):
        return [do_chunk(c) for c in chunks]

    ranges = [r for r in np.array_split(np.arange(n_chunks), min(cfg.n_workers, n_chunks)) if len(r)]
    if len(ranges) == 1:
        per_chunk = do_range(ranges[0])
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as ex:
            per_chunk = [s for part in ex.map(do_range, ranges) for s in part]
    total = _Stats()
    for s in per_chunk:
        total = total.merge(s)
    if total.n == 0:
        value, se = math.nan, math.nan
    else:
        value = factor * total.mean
        if cfg.low_discrepancy or total.n < 2:
            se = 0.0
        else:
            se = abs(factor) * math.sqrt(total.m2 / (total.n - 1)) / math.sqrt(total.n)
    n_used = total.n - total.rejected if rejected_in_values else total.n
    res = EstimateResult(value, se, n_used, total.rejected, cfg.low_discrepancy)
    return res, total.hits


def _check_poly(poly: SparsePolynomial):
    if poly.is_constant:
        raise ConstantPoly("level-set estimators need a nonconstant polynomial")


def _grad_norm(poly, Z):
    return stable_norm(gradient_many(poly, Z), axis=1)


def _uniform_setup(domain: PolyDomain):
    prop = UniformProposal(domain.box_radii)
    if domain.kind is DomainKind.BALL:
        return prop, domain.volume, True
    return prop, prop.volume, False


# -- estimators ---------------------------------------------------------------

def mc_sublevel_volume(poly: SparsePolynomial, eps: float, cfg: SamplerConfig) -> EstimateResult:
    """Vol{z in domain : |f(z)| < eps} by uniform sampling."""
    _check_poly(poly)
    if not eps > 0:
        raise BadConfig(f"eps must be > 0, got {eps}")
    domain = cfg.resolve_domain(poly.dimension)
    prop, factor, is_ball = _uniform_setup(domain)

    def kernel(U):
        Z = prop.draw(U)
        rejected = 0
        if is_ball:
            inside = domain.contains(Z)
            rejected = int((~inside).sum())
            Z = Z[inside]
        ind = (np.abs(evaluate_many(poly, Z)) < eps).astype(np.float64)
        return ind, rejected, 0

    return run_kernel(cfg, prop.width, kernel, factor)[0]


def mc_shell_surface_integral(poly: SparsePolynomial, shell: ShellSpec, weight: Weight,
                              cfg: SamplerConfig, custom: Optional[Callable] = None,
                              proposal: str = "uniform") -> EstimateResult:
    """Thin-shell estimate of the surface integral of a weight over {|f| = eps}.

    Averages w * |d f| over {eps - delta < |f| < eps + delta} and divides by
    2 delta (coarea formula with |grad |f|| = |df|). GRAD_F takes w = |df|.
    ``proposal="adaptive"`` samples near the zero set instead of uniformly.
    """
    _check_poly(poly)
    weight = Weight(weight)
    if weight is Weight.CUSTOM and custom is None:
        raise BadConfig("CUSTOM weight needs an evaluator")
    if proposal not in ("uniform", "adaptive"):
        raise BadConfig(f"unknown proposal {proposal!r}")
    domain = cfg.resolve_domain(poly.dimension)
    lo, hi = shell.eps - shell.half_width, shell.eps + shell.half_width
    inv2d = 1.0 / (2.0 * shell.half_width)

    def shell_weight(Z):
        g = _grad_norm(poly, Z)
        if weight is Weight.UNIT:
            return g
        if weight is Weight.GRAD_F:
            return g * g
        return np.asarray(custom(Z), dtype=np.float64) * g

    if proposal == "uniform":
        prop, factor, is_ball = _uniform_setup(domain)

        def kernel(U):
            Z = prop.draw(U)
            rejected = 0
            if is_ball:
                inside = domain.contains(Z)
                rejected = int((~inside).sum())
                Z = Z[inside]
            absf = np.abs(evaluate_many(poly, Z))
            hit = (absf > lo) & (absf < hi)
            vals = np.zeros(len(Z))
            if hit.any():
                vals[hit] = shell_weight(Z[hit]) * inv2d
            return vals, rejected, int(hit.sum())
        width = prop.width
    else:
        prop = RootAdaptedProposal(poly, domain.box_radii, lo)
        factor = 1.0

        def kernel(U):
            Z, log_q = prop.draw(U)
            absf = np.abs(evaluate_many(poly, Z))
            hit = (absf > lo) & (absf < hi) & domain.contains(Z) & np.isfinite(log_q)
            vals = np.zeros(len(Z))
            if hit.any():
                vals[hit] = shell_weight(Z[hit]) * inv2d * np.exp(-log_q[hit])
            return vals, 0, int(hit.sum())
        width = prop.width

    res, hits = run_kernel(cfg, width, kernel, factor)
    if hits == 0:
        raise DegenerateShell(f"no sample landed in the shell {lo:g} < |f| < {hi:g}")
    return res


def mc_sublevel_energy(poly: SparsePolynomial, eps: float, p: float, cfg: SamplerConfig) -> EstimateResult:
    """Integral of |df|^p over {|f| < eps}."""
    _check_poly(poly)
    if not eps > 0 or not p > 0:
        raise BadConfig(f"need eps > 0 and p > 0, got eps={eps}, p={p}")
    domain = cfg.resolve_domain(poly.dimension)
    prop, factor, is_ball = _uniform_setup(domain)

    def kernel(U):
        Z = prop.draw(U)
        rejected = 0
        if is_ball:
            inside = domain.contains(Z)
            rejected = int((~inside).sum())
            Z = Z[inside]
        sub = np.abs(evaluate_many(poly, Z)) < eps
        vals = np.zeros(len(Z))
        if sub.any():
            g = _grad_norm(poly, Z[sub])
            vals[sub] = g * g if p == 2 else g ** p
        return vals, rejected, int(sub.sum())

    return run_kernel(cfg, prop.width, kernel, factor)[0]


def mc_graph_fiber_volume(exponents: Sequence[int], w: complex, cfg: SamplerConfig) -> EstimateResult:
    """Area of the fiber {z^A = w} in the unit polydisc via the graph formula.

    Integrates the graph area density over the base z' = (z_1..z_{n-1});
    points outside the admissible base contribute zero.
    """
    a = [int(x) for x in exponents]
    if len(a) < 2 or a[-1] < 1 or any(x < 0 for x in a):
        raise BadConfig(f"need n >= 2, nonnegative exponents and a_n >= 1, got {list(exponents)}")
    if not abs(w) > 0 or not abs(w) < 1:
        raise BadConfig(f"need 0 < |w| < 1, got {w}")
    m = len(a) - 1
    r_lo = [abs(w) ** (1.0 / aj) / 2 if aj > 0 else 0.5 for aj in a[:-1]]
    prop = loguniform_proposal((1.0,) * m, r_lo)

    def kernel(U):
        Z, log_q = prop.draw(U)
        val = graph_volume_integrand_many(a, w, Z)
        ok = np.isfinite(val) & np.isfinite(log_q)
        out = np.zeros(len(Z))
        out[ok] = val[ok] * np.exp(-log_q[ok])
        return out, 0, int(ok.sum())

    return run_kernel(cfg, prop.width, kernel)[0]


def mc_weighted_integral(poly: SparsePolynomial, integrand: Integrand, region: RegionSpec,
                         cfg: SamplerConfig) -> EstimateResult:
    """Importance-sampled integral of a singular integrand over a region.

    Annulus regions {a <= |f| < b} sample near the zero set; the domain and
    sub-balls use heavy-tailed radial laws about the coordinate axes.
    Samples with |f| < 1e-300 inside the region are rejected and counted;
    they contribute zero, which keeps the estimate unbiased for the
    integral over {|f| >= 1e-300}.
    """
    _check_poly(poly)
    if not isinstance(integrand, Integrand):
        raise BadConfig(f"integrand must be an Integrand, got {integrand!r}")
    domain = cfg.resolve_domain(poly.dimension)
    if region.kind is RegionKind.ANNULUS:
        prop = RootAdaptedProposal(poly, domain.box_radii, region.a)
    elif region.kind is RegionKind.BALL:
        R = min(region.radius, min(domain.box_radii))
        prop = lomax_proposal((R,) * poly.dimension)
    else:
        prop = lomax_proposal(domain.box_radii)
    sup_limit = LOGLOG_SUP if integrand.needs_loglog else (1.0 if integrand.needs_log else math.inf)

    def kernel(U):
        Z, log_q = prop.draw(U)
        inside = domain.contains(Z) & np.isfinite(log_q)
        absf = np.abs(evaluate_many(poly, Z))
        if inside.any() and absf[inside].max() >= sup_limit:
            raise NormalizationError(
                f"sampled |f| reaches {absf[inside].max():.4g} >= {sup_limit:.4g}; rescale f first",
                sup_sample=float(absf[inside].max()))
        if region.kind is RegionKind.ANNULUS:
            inreg = inside & (absf >= region.a) & (absf < region.b)
        elif region.kind is RegionKind.BALL:
            inreg = inside & (stable_norm(Z, axis=1) < region.radius)
        else:
            inreg = inside
        floor = inreg & (absf < F_FLOOR)
        use = inreg & ~floor
        vals = np.zeros(len(Z))
        if use.any():
            Zu = Z[use]
            with np.errstate(divide="ignore"):
                lf = np.log(absf[use])
                lg = np.log(_grad_norm(poly, Zu))
                lh = np.log(hessian_frobenius_many(poly, Zu)) if integrand.needs_hessian else None
            vals[use] = np.exp(integrand.log_value(lf, lg, lh) - log_q[use])
        return vals, int(floor.sum()), int(use.sum())

    return run_kernel(cfg, prop.width, kernel, rejected_in_values=True)[0]
