"""Level-set integrals, Lojasiewicz exponents and Sobolev-integrability verdicts
for holomorphic polynomials on polydiscs."""
from .errors import HolosetError
from .poly import PolyDomain, SparsePolynomial, cusp
from .estimator import SamplerConfig, ShellSpec, Weight, EstimateResult
from .singular import Integrand
from .sobolev import Verdict

__all__ = ["HolosetError", "PolyDomain", "SparsePolynomial", "cusp", "SamplerConfig", "ShellSpec",
           "Weight", "EstimateResult", "Integrand", "Verdict"]
__version__ = "0.1.0"
