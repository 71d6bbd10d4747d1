"""Point evaluators for u = log(-log|f|^2), v = 1/u and their derivatives, plus
dyadic-annulus integrability verdicts and the 1-D reference integrals

    int_0^upper dt / (t^a |ln t|^b (ln|ln t|)^c).
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import mpmath
import numpy as np
from scipy import integrate

from . import rng
from .errors import BadConfig, DomainError, NotNormalized, OnZeroSet
from .estimator import F_FLOOR, RegionSpec, SamplerConfig, mc_weighted_integral
from .poly import DomainKind, SparsePolynomial, evaluate, evaluate_many, gradient, hessian_many
from .sampling import UniformProposal
from .singular import Integrand

RESCALE_STREAM = 1 << 40
RESCALE_SAMPLES = 100_000


class Verdict(str, enum.Enum):
    CONVERGENT = "CONVERGENT"
    DIVERGENT = "DIVERGENT"
    INCONCLUSIVE = "INCONCLUSIVE"


class SingularKind(str, enum.Enum):
    U = "U"
    V = "V"
    G = "G"
    T = "T"
    GRAD_U_NORM = "GRAD_U_NORM"
    GRAD_V_NORM = "GRAD_V_NORM"
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"


# -- point evaluators ---------------------------------------------------------------

def eval_singular(kind, poly: SparsePolynomial, point, indices: Optional[tuple] = None):
    """Exact value of one of the singular quantities at a point with 0 < |f| < 1/2.

    With ``indices=(i, j)`` (zero-based) the A-kinds return the complex pieces
    of d^2 v / dz_i dz_j; without, they return the matrix-norm versions
    (Frobenius norm over i, j), with A1 using the complex Hessian.
    """
    kind = SingularKind(kind)
    fz = evaluate(poly, point)
    af = abs(fz)
    if af < F_FLOOR:
        raise OnZeroSet(f"|f| = {af:.3g} is below the evaluation floor")
    if af >= 0.5:
        raise NotNormalized(f"|f| = {af:.4g} >= 1/2; rescale f first")
    L1 = math.log(af * af)
    L2 = math.log(-L1)
    grad, gnorm = gradient(poly, point)
    grad_u_sq = 4 * gnorm**2 / (af**2 * L1**2)
    K = SingularKind
    if kind is K.U:
        return L2
    if kind is K.V:
        return 1.0 / L2
    if kind is K.G:
        return -grad_u_sq
    if kind is K.T:
        return grad_u_sq * (1 / L2**2 + 2 / L2**3)
    if kind is K.GRAD_U_NORM:
        return math.sqrt(grad_u_sq)
    if kind is K.GRAD_V_NORM:
        return math.sqrt(grad_u_sq) / L2**2
    if indices is not None:
        i, j = indices
        n = poly.dimension
        if not (0 <= i < n and 0 <= j < n):
            raise DomainError(f"indices {indices} out of range for n={n}")
        H = hessian_many(poly, np.asarray(point, dtype=np.complex128)[None, :])[0]
        gij = grad[i] * grad[j] / fz**2
        return {K.A1: -H[i, j] / (fz * L1 * L2**2),
                K.A2: gij / (L1 * L2**2),
                K.A3: gij / (L1**2 * L2**2),
                K.A4: 2 * gij / (L1**2 * L2**3)}[kind]
    H = hessian_many(poly, np.asarray(point, dtype=np.complex128)[None, :])[0]
    hnorm = float(np.linalg.norm(H))
    g2 = gnorm**2 / af**2
    return {K.A1: hnorm / (af * abs(L1) * L2**2),
            K.A2: g2 / (abs(L1) * L2**2),
            K.A3: g2 / (L1**2 * L2**2),
            K.A4: 2 * g2 / (L1**2 * L2**3)}[kind]


# -- normalization ------------------------------------------------------------------------

@dataclass(frozen=True)
class RescaleRecord:
    scale_c: float
    sup_sample: float
    n_samples: int
    seed: int

    def to_dict(self):
        return dataclasses.asdict(self)


def rescale(poly: SparsePolynomial, seed: int = 0, domain=None,
            n_samples: int = RESCALE_SAMPLES) -> tuple:
    """Return (c f, record) with c = 1 / (4 sup|f|) over uniform domain samples."""
    cfg = SamplerConfig(seed=seed, n_samples=max(n_samples, 1000), domain=domain)
    dom = cfg.resolve_domain(poly.dimension)
    prop = UniformProposal(dom.box_radii)
    U = rng.uniforms(seed, 0, n_samples, prop.width, RESCALE_STREAM)
    Z = prop.draw(U)
    if dom.kind is DomainKind.BALL:
        Z = Z[dom.contains(Z)]
    sup = float(np.abs(evaluate_many(poly, Z)).max())
    if not sup > 0:
        raise BadConfig("f vanishes on every rescaling sample")
    c = 1.0 / (4.0 * sup)
    return poly.scaled(c), RescaleRecord(c, sup, n_samples, int(seed))


# -- dyadic ledgers -----------------------------------------------------------------------

@dataclass(frozen=True)
class AnnulusTerm:
    j: int
    a: float
    b: float
    value: float          # NaN when the annulus received no samples
    std_error: float
    n_used: int
    n_rejected: int

    @property
    def empty(self) -> bool:
        return math.isnan(self.value)


@dataclass(frozen=True)
class AnnulusLedger:
    integrand: str
    j_range: tuple
    terms: tuple
    partial_sums: tuple
    verdict: Verdict
    extrapolated_total: Optional[float]
    ratios: tuple
    rescale: Optional[RescaleRecord]
    flags: tuple = ()
    exploratory: bool = False

    def to_dict(self):
        return {"integrand": self.integrand, "j_range": list(self.j_range),
                "terms": [dataclasses.asdict(t) | {"empty": t.empty} for t in self.terms],
                "partial_sums": list(self.partial_sums), "ratios": list(self.ratios),
                "verdict": self.verdict.value, "extrapolated_total": self.extrapolated_total,
                "rescale": None if self.rescale is None else self.rescale.to_dict(),
                "flags": list(self.flags), "exploratory": self.exploratory}


WINDOW = 5
RATIO_CONVERGENT = 0.95
GROWTH_DIVERGENT = 0.10
NOISE_SIGMAS = 3.0


def judge_terms(values, errors) -> tuple:
    """Verdict, extrapolated total and window ratios from per-annulus terms."""
    v = np.asarray(values, dtype=float)
    e = np.asarray(errors, dtype=float)
    if len(v) < WINDOW + 1:
        raise BadConfig(f"need at least {WINDOW + 1} annuli, got {len(v)}")
    partial = np.cumsum(np.nan_to_num(v, nan=0.0))
    tail, tail_e = v[-(WINDOW + 1):], e[-(WINDOW + 1):]
    if np.any(np.isnan(tail)) or np.any(tail <= 0):
        return Verdict.INCONCLUSIVE, None, ()
    ratios = tail[1:] / tail[:-1]
    if np.all(ratios < RATIO_CONVERGENT):
        r = float(ratios.max())
        return Verdict.CONVERGENT, float(partial[-1] + tail[-1] * r / (1 - r)), tuple(ratios)
    slack = NOISE_SIGMAS * np.hypot(tail_e[1:], tail_e[:-1])
    nondecreasing = np.all(tail[1:] >= tail[:-1] - slack)
    ps = partial[-(WINDOW + 1):]
    growing = np.all(np.diff(ps) >= GROWTH_DIVERGENT * ps[:-1])
    if nondecreasing or growing:
        return Verdict.DIVERGENT, None, tuple(ratios)
    return Verdict.INCONCLUSIVE, None, tuple(ratios)


def _has_oracle(poly: SparsePolynomial) -> bool:
    # monomials and the z1^p - z2^q family carry analytic verdicts
    if poly.is_monomial:
        return True
    if poly.dimension == 2 and len(poly.terms) == 2:
        (i1, _), (i2, _) = poly.terms
        return (i1[0] * i1[1] == 0 and i2[0] * i2[1] == 0 and sum(i1) > 0 and sum(i2) > 0
                and {bool(i1[0]), bool(i2[0])} == {True, False})
    return False


def dyadic_integrability_test(poly: SparsePolynomial, integrand: Integrand, j0: int = 2, j1: int = 18,
                              cfg: Optional[SamplerConfig] = None, normalize: bool = True) -> AnnulusLedger:
    """Estimate the integral over each E_j = {2^-j <= |c f| < 2^-(j-1)} and judge the series.

    f is first rescaled (c = 1/(4 sup|f|)); annulus j uses RNG stream j.
    """
    if not (isinstance(j0, int) and isinstance(j1, int) and j1 > j0 >= 1):
        raise BadConfig(f"need integers j1 > j0 >= 1, got ({j0}, {j1})")
    if j1 - j0 < WINDOW:
        raise BadConfig(f"need j1 - j0 >= {WINDOW} for the ratio window")
    cfg = cfg or SamplerConfig(n_samples=1_000_000)
    record = None
    subject = poly
    if normalize:
        subject, record = rescale(poly, seed=cfg.seed, domain=cfg.domain)
    terms, flags = [], []
    for j in range(j0, j1 + 1):
        a, b = 2.0**-j, 2.0 ** -(j - 1)
        res = mc_weighted_integral(subject, integrand, RegionSpec.annulus(a, b),
                                   dataclasses.replace(cfg, stream=j))
        value = res.value if res.value > 0 else math.nan
        if math.isnan(value):
            flags.append(f"EMPTY_ANNULUS j={j}")
        terms.append(AnnulusTerm(j, a, b, value, res.std_error, res.n_used, res.n_rejected))
    verdict, extrap, ratios = judge_terms([t.value for t in terms], [t.std_error for t in terms])
    partial = tuple(float(x) for x in np.cumsum([0.0 if t.empty else t.value for t in terms]))
    return AnnulusLedger(integrand.label, (j0, j1), tuple(terms), partial, verdict, extrap,
                         tuple(float(r) for r in ratios), record, tuple(flags), not _has_oracle(poly))


# -- 1-D reference integrals --------------------------------------------------------------

def classify_convergence(a: float, b: float, c: float) -> Verdict:
    """Analytic verdict for int_0 dt / (t^a |ln t|^b (ln|ln t|)^c)."""
    if a < 1 or (a == 1 and b > 1) or (a == 1 and b == 1 and c > 1):
        return Verdict.CONVERGENT
    return Verdict.DIVERGENT


def _y_integrand(a, b, c):
    # t = exp(-e^y): dt / (t^a |ln t|^b (ln|ln t|)^c) = exp(-(1-a) e^y) e^{(1-b) y} y^-c dy
    if a == 1:
        def h(y):
            return math.exp((1 - b) * y - c * math.log(y))
    else:
        def h(y):
            return math.exp(-(1 - a) * math.exp(y) + (1 - b) * y - c * math.log(y))
    return h


def reference_integral_y(a: float, b: float, c: float, y_lo: float, y_hi: float) -> float:
    """The reference integrand integrated over y = ln|ln t| in [y_lo, y_hi] (y_lo > 0)."""
    if not 0 < y_lo <= y_hi:
        raise DomainError("need 0 < y_lo <= y_hi")
    with mpmath.workdps(30):
        def f(y):
            return mpmath.exp(-(1 - a) * mpmath.exp(y) + (1 - b) * y) * y ** (-c)
        return float(mpmath.quad(f, list(np.linspace(y_lo, y_hi, 9))))


def partial_reference_integral(a: float, b: float, c: float, lower: float, upper: float) -> float:
    """int_lower^upper of the reference integrand, 0 < lower < upper < 1/e."""
    if not 0 < lower < upper < math.exp(-1):
        raise DomainError("need 0 < lower < upper < 1/e")
    return reference_integral_y(a, b, c, math.log(-math.log(upper)), math.log(-math.log(lower)))


def radial_reference_integral(a: float, b: float, c: float, upper: float) -> Union[float, Verdict]:
    """int_0^upper dt / (t^a |ln t|^b (ln|ln t|)^c), or Verdict.DIVERGENT."""
    if not 0 < upper < math.exp(-1):
        raise DomainError(f"upper must lie in (0, 1/e), got {upper}")
    if classify_convergence(a, b, c) is Verdict.DIVERGENT:
        return Verdict.DIVERGENT
    y0 = math.log(-math.log(upper))
    h = _y_integrand(a, b, c)
    if a == 1:
        val, _ = integrate.quad(h, y0, math.inf, epsabs=0.0, epsrel=1e-12, limit=500)
        return float(val)
    # the integrand dies like exp(-(1-a) e^y); stop once it is far below double precision
    y_end = max(y0 + 1.0, math.log(800.0 / (1 - a)))
    val, _ = integrate.quad(h, y0, y_end, epsabs=0.0, epsrel=1e-12, limit=500)
    return float(val)
