"""Nearly-optimal regenerating codes over small prime fields."""

from . import extfield, gf, linalg, nmbr, nmsr
from .errors import (
    CorruptionError,
    CosetCollision,
    ParameterError,
    ProtocolError,
    RegenError,
    SingularMatrix,
    SingularStein,
)
from .extfield import ExtFieldRep, companion, find_primitive_poly
from .gf import FieldElement, PrimeField, prime_field
from .linalg import GfMatrix, solve_stein
from .shares import NodeShare, RepairPacket

__version__ = "0.1.0"

__all__ = [
    "CorruptionError", "CosetCollision", "ExtFieldRep", "FieldElement", "GfMatrix", "NodeShare",
    "ParameterError", "PrimeField", "ProtocolError", "RegenError", "RepairPacket", "SingularMatrix",
    "SingularStein", "companion", "extfield", "find_primitive_poly", "gf", "linalg", "nmbr", "nmsr",
    "prime_field", "solve_stein",
]
