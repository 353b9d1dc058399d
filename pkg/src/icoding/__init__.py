"""Unicast-based linear index codes: UMCD supports, MCD construction and baselines."""

from icoding.errors import (
    CapExceededError,
    ContractViolation,
    FieldTooSmallError,
    IndexCodingError,
    InvalidInstanceError,
    ParseError,
)
from icoding.gf import FieldElement, FieldMatrix, next_prime_at_least
from icoding.instance import Instance, Subinstance, named_instance
from icoding.matching import BinaryMatrix, mcm, mcm_submatrix
from icoding.mcd import mcd, verify_maxrank
from icoding.umcd import TieBreak, UmcdResult, q_min, run_umcd, umcd_rate

__all__ = [
    "BinaryMatrix",
    "CapExceededError",
    "ContractViolation",
    "FieldElement",
    "FieldMatrix",
    "FieldTooSmallError",
    "IndexCodingError",
    "Instance",
    "InvalidInstanceError",
    "ParseError",
    "Subinstance",
    "TieBreak",
    "UmcdResult",
    "mcd",
    "mcm",
    "mcm_submatrix",
    "named_instance",
    "next_prime_at_least",
    "q_min",
    "run_umcd",
    "umcd_rate",
    "verify_maxrank",
]
