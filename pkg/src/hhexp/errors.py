"""Exception hierarchy.

Domain errors (degenerate inputs) and design errors (infeasible sampling
configurations) are kept apart so the command line can map them to
different exit codes.
"""


class HHExpError(Exception):
    """Base class for all package errors."""


class DomainError(HHExpError, ValueError):
    """Input data is degenerate for the requested computation."""


class DesignError(HHExpError, ValueError):
    """A sampling design cannot be realized on the given population."""


class ParseError(DomainError):
    pass


class DegenerateStratum(DomainError):
    pass


class ZeroMean(DomainError):
    pass


class ZeroCV(DomainError):
    pass


class ZeroMSE(DomainError):
    pass


class InfeasibleSpec(DomainError):
    pass


class EmptySubset(DomainError):
    pass


class NoRespondents(DomainError):
    pass


class RegimeMismatch(DomainError):
    pass


class SingularExponent(DomainError):
    pass


class AllDrawsSkipped(DomainError):
    pass


class DesignInfeasible(DesignError):
    pass


class TooLarge(DesignError):
    pass
