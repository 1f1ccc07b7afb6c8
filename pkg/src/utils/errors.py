"""
Exception hierarchy for nsvalue

None of these derive from ValueError, so pydantic validators raise them unwrapped.
"""
from typing import Optional


class NSValueError(Exception):
    """Base class for all domain errors"""

    exit_code: int = 1


# Games and strategies

class NonNormalizedDistribution(NSValueError):
    """Question distribution is negative somewhere or does not sum to 1"""


class PayoffOutOfRange(NSValueError):
    """A payoff entry lies outside [0, 1]"""


class EmptyGame(NSValueError):
    """No questions survive validation"""


class DimensionMismatch(NSValueError):
    """Indices or vector lengths disagree with the declared dimensions"""


class StrategyNotNormalized(NSValueError):
    """Some conditional distribution of a strategy does not sum to 1"""


class SignalingStrategy(NSValueError):
    """A strategy whose marginals depend on the other side's question"""


# Guards

class EnumerationTooLarge(NSValueError):
    """A brute-force enumeration exceeds its configured guard"""

    exit_code = 3


class TooLargeForExact(NSValueError):
    """The exact rational oracle refuses a program above its size guard"""

    exit_code = 3


# Verifier compilation

class IncompleteSpec(NSValueError):
    """A verifier description does not cover every random string"""


# LP pipeline

class ShapeMismatch(NSValueError):
    """A transformation received a program of the wrong stage or dimensions"""


class InfeasibleInput(NSValueError):
    """Input to a constructive step violates its feasibility preconditions"""


class NotApproxFeasible(NSValueError):
    """A claimed approximate solution fails exact verification"""


# Solvers and engines

class InvalidEpsilon(NSValueError):
    """Accuracy parameter outside (0, 1)"""

    exit_code = 2


class NegativeEntry(NSValueError):
    """Packing/covering data contains a negative entry"""


class InvalidThresholds(NSValueError):
    """Thresholds violate 0 <= s < c <= 1"""

    exit_code = 2


class SolverError(NSValueError):
    """The approximate solver exhausted its round budget and retries"""


# File formats

class FormatError(NSValueError):
    """Malformed input file"""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        location = ""
        if source:
            location += f"{source}:"
        if line is not None:
            location += f"{line}:"
        super().__init__(f"{location} {message}" if location else message)
