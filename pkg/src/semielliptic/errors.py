"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SemiEllipticError(Exception):
    """Base class for all library errors."""

    #: process exit code used by the command-line front end
    exit_code = 1

    def to_json(self) -> dict:
        payload = {"error": type(self).__name__, "message": str(self)}
        payload.update(getattr(self, "details", {}) or {})
        return payload


class PreconditionError(SemiEllipticError):
    exit_code = 2


class PrecisionError(SemiEllipticError):
    exit_code = 3


class ParseError(SemiEllipticError):
    exit_code = 4


# numeric kernel
class DivisionByZero(PreconditionError, ZeroDivisionError):
    pass


class LogOfZero(PreconditionError, ValueError):
    pass


class PrecisionUnderflow(PrecisionError, ValueError):
    pass


class NumericOverflow(PrecisionError, OverflowError):
    pass


# lattice
class DegenerateLattice(PreconditionError, ValueError):
    pass


class SingularCurve(PreconditionError, ValueError):
    pass


class PrecisionLoss(PrecisionError):
    pass


class InsufficientPrecision(PrecisionError):
    pass


# weierstrass
class PoleAtLatticePoint(PreconditionError, ValueError):
    pass


class DegenerateAddition(PreconditionError, ValueError):
    pass


class ZeroMultiplier(PreconditionError, ValueError):
    pass


class NotCM(PreconditionError, ValueError):
    pass


class InterpolationFailure(PrecisionError):
    pass


# divpoly
class CertificateNotFound(PrecisionError):
    pass


# relations
class PreconditionViolated(PreconditionError):
    def __init__(self, message: str, relation=None):
        super().__init__(message)
        self.relation = relation
        self.details = {"relation": relation.to_json()} if relation is not None else {}


# cli
class ExprSyntaxError(ParseError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.details = {"offset": offset}


class UnknownIdentifier(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r} at offset {offset}")
        self.name = name
        self.offset = offset
        self.details = {"identifier": name, "offset": offset}
