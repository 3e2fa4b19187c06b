"""Exception hierarchy shared by the codecs and the storage tooling."""

from __future__ import annotations


class RegenError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(RegenError, ValueError):
    """Code parameters violate a construction condition."""

    condition = "parameters"


class A1Violation(ParameterError):
    condition = "A1"


class A2Violation(ParameterError):
    condition = "A2"


class DegreeOrderViolation(ParameterError):
    condition = "k <= d <= n-1"


class B1Violation(ParameterError):
    condition = "B1"


class B2Violation(ParameterError):
    condition = "B2"


class NotEnoughCosets(ParameterError):
    condition = "B1 (coset count)"


class ProtocolError(RegenError):
    """Repair or reconstruction could not be carried out."""


class SingularMatrix(ProtocolError, ArithmeticError):
    def __init__(self, message: str, rank: int | None = None) -> None:
        super().__init__(message)
        self.rank = rank


class SingularStein(SingularMatrix):
    """``A X B - X = C`` has no unique solution (1 is an eigenvalue of ``B^T (x) A``)."""


class CosetCollision(SingularStein):
    """Two reconstruction participants carry indices from one cyclotomic coset."""


class CorruptionError(ProtocolError):
    """Data failed an integrity or consistency check."""
