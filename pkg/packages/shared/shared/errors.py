"""
Error types.

Every contract violation raised by the algebra and verification packages is a
ContractError, so entry scripts can map the whole family to exit status 2.
"""


class ContractError(ValueError):
    """A precondition or internal consistency contract was violated."""


# --- FIELDS ---

class NonPrime(ContractError):
    pass


class NoIrreducibleFound(ContractError):
    pass


class NotFound(ContractError):
    pass


class FieldTooLarge(ContractError):
    pass


class FieldMismatch(ContractError):
    pass


# --- POLYNOMIALS ---

class DivisionByZeroPoly(ContractError):
    pass


class NotMonic(ContractError):
    pass


class ZeroPolynomial(ContractError):
    pass


class DimensionMismatch(ContractError):
    pass


class StandingAssumptionViolation(ContractError):
    pass


class InsufficientScalars(ContractError):
    pass


class NonHomogeneousLeadingPart(ContractError):
    pass


# --- ENUMERATION / VERIFICATION ---

class WorkCeilingExceeded(ContractError):
    pass


class ReportMismatch(ContractError):
    pass


class InvalidPattern(ContractError):
    pass


class InconsistentSystem(ContractError):
    pass


class DegenerateFamily(ContractError):
    pass


class CoefficientNotRational(ContractError):
    pass


class HypothesisRangeViolation(ContractError):
    pass


class NonDivisibleCount(ContractError):
    pass


# --- CONFIG ---

class ConfigError(ContractError):
    pass
