"""Exception hierarchy. Every error carries a machine-readable ``code``."""


class HolosetError(Exception):
    code = "ERROR"

    def __init__(self, message="", **context):
        super().__init__(message)
        self.context = {k: v for k, v in context.items() if v is not None}

    def as_dict(self):
        return {"code": self.code, "message": str(self), **self.context}


class DimensionMismatch(HolosetError, ValueError):
    code = "DIMENSION_MISMATCH"


class DomainError(HolosetError, ValueError):
    code = "DOMAIN"


class BadConfig(HolosetError, ValueError):
    code = "BAD_CONFIG"


class DegenerateShell(HolosetError):
    code = "DEGENERATE_SHELL"


class OutsideBase(HolosetError, ValueError):
    code = "OUTSIDE_BASE"


class NormalizationError(HolosetError):
    code = "NORMALIZATION"


class NotNormalized(HolosetError, ValueError):
    code = "NOT_NORMALIZED"


class OnZeroSet(HolosetError, ValueError):
    code = "ON_ZERO_SET"


class InsufficientPoints(HolosetError, ValueError):
    code = "INSUFFICIENT_POINTS"


class NonpositiveValue(HolosetError, ValueError):
    code = "NONPOSITIVE_VALUE"


class AllDirectionsDegenerate(HolosetError):
    code = "ALL_DIRECTIONS_DEGENERATE"


class ParseError(HolosetError, ValueError):
    code = "PARSE_ERROR"


class ConstantPoly(HolosetError, ValueError):
    code = "CONSTANT_POLY"
