"""Singular integrands built from u = log(-log|f|^2) and v = 1/u.

All kernels work in log space from (ln|f|, ln|df|, ln|Hf|), so the deep
dyadic bands (|f| ~ 2^-18 and below) neither overflow nor lose digits.
Notation: L1 = log|f|^2 < 0 and L2 = log(-L1), positive once |f| < e^{-1/2}.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BadConfig

LN2 = math.log(2.0)
LN4 = math.log(4.0)


class IntegrandKind(str, enum.Enum):
    GRAD_U_SQ = "GRAD_U_SQ"
    GRAD_U_P = "GRAD_U_P"
    GRAD_V_SQ = "GRAD_V_SQ"
    ABS_G = "ABS_G"
    ABS_G_P = "ABS_G_P"
    ABS_T = "ABS_T"
    A1_HESS = "A1_HESS"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    INV_F_P = "INV_F_P"
    LOG_DERIV_P = "LOG_DERIV_P"
    WEIGHTED_GRAD = "WEIGHTED_GRAD"


_PARAMETRIC = {IntegrandKind.GRAD_U_P, IntegrandKind.ABS_G_P, IntegrandKind.INV_F_P,
               IntegrandKind.LOG_DERIV_P, IntegrandKind.WEIGHTED_GRAD}
_LOGLOG = {IntegrandKind.GRAD_V_SQ, IntegrandKind.ABS_T, IntegrandKind.A1_HESS,
           IntegrandKind.A2, IntegrandKind.A3, IntegrandKind.A4}
_LOG = _LOGLOG | {IntegrandKind.GRAD_U_SQ, IntegrandKind.GRAD_U_P,
                  IntegrandKind.ABS_G, IntegrandKind.ABS_G_P}


@dataclass(frozen=True)
class Integrand:
    """An integrand kind plus its exponent (p or delta) where one applies."""

    kind: IntegrandKind
    param: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", IntegrandKind(self.kind))
        if (self.kind in _PARAMETRIC) != (self.param is not None):
            raise BadConfig(f"{self.kind.value} {'needs' if self.kind in _PARAMETRIC else 'takes no'} parameter")
        if self.param is not None and not (math.isfinite(self.param) and self.param > 0):
            raise BadConfig(f"parameter must be a positive finite number, got {self.param}")

    @classmethod
    def parse(cls, text: str) -> "Integrand":
        """'GRAD_U_P(2.5)' or 'ABS_T' (case-insensitive)."""
        t = text.strip().upper()
        if "(" in t:
            name, arg = t.rstrip(")").split("(", 1)
            try:
                return cls(IntegrandKind(name.strip()), float(arg))
            except ValueError as exc:
                raise BadConfig(f"unknown integrand {text!r}") from exc
        try:
            return cls(IntegrandKind(t))
        except ValueError as exc:
            raise BadConfig(f"unknown integrand {text!r}") from exc

    @property
    def label(self) -> str:
        return self.kind.value if self.param is None else f"{self.kind.value}({self.param:g})"

    @property
    def needs_loglog(self) -> bool:
        return self.kind in _LOGLOG

    @property
    def needs_log(self) -> bool:
        return self.kind in _LOG

    @property
    def needs_hessian(self) -> bool:
        return self.kind is IntegrandKind.A1_HESS

    def log_value(self, lf, lg, lh=None):
        """ln of the integrand from ln|f|, ln|df| and (for A1) ln||Hf||_F."""
        K = IntegrandKind
        kind, p = self.kind, self.param
        with np.errstate(divide="ignore", invalid="ignore"):
            if kind is K.INV_F_P:
                return -p * lf
            if kind is K.LOG_DERIV_P:
                return p * (lg - lf)
            if kind is K.WEIGHTED_GRAD:
                return 2 * lg - p * lf
            ln_nL1 = np.log(-2.0 * lf)              # ln|L1|
            grad_u_sq = LN4 + 2 * lg - 2 * lf - 2 * ln_nL1
            if kind in (K.GRAD_U_SQ, K.ABS_G):
                return grad_u_sq
            if kind is K.GRAD_U_P:
                return 0.5 * p * grad_u_sq
            if kind is K.ABS_G_P:
                return p * grad_u_sq
            L2 = np.log(-2.0 * lf)
            ln_L2 = np.log(L2)
            if kind is K.GRAD_V_SQ:
                return grad_u_sq - 4 * ln_L2
            if kind is K.ABS_T:
                return grad_u_sq + np.log(1.0 / L2**2 + 2.0 / L2**3)
            if kind is K.A1_HESS:
                return lh - lf - ln_nL1 - 2 * ln_L2
            if kind is K.A2:
                return 2 * lg - 2 * lf - ln_nL1 - 2 * ln_L2
            if kind is K.A3:
                return 2 * lg - 2 * lf - 2 * ln_nL1 - 2 * ln_L2
            if kind is K.A4:
                return LN2 + 2 * lg - 2 * lf - 2 * ln_nL1 - 3 * ln_L2
        raise BadConfig(f"unhandled integrand {kind}")  # pragma: no cover

    def value(self, lf, lg, lh=None):
        return np.exp(self.log_value(lf, lg, lh))
