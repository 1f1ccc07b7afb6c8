"""
Decision and approximation results of the value engine
"""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from src.models.certificates import ComplementedCertificate
from src.utils.rationals import ONE, ZERO, Rational


class Decision(str, Enum):
    AT_MOST_S = "AT_MOST_S"
    AT_LEAST_C = "AT_LEAST_C"


class Verdict(BaseModel):
    """Answer to the promise problem w_ns <= s versus w_ns >= c"""

    model_config = {"frozen": True}

    decision: Decision
    s: Rational
    c: Rational
    epsilon_used: Rational
    certificate: Optional[ComplementedCertificate] = Field(
        None, description="repaired point of the complemented dual, present for AT_MOST_S"
    )
    rounds: int = 0

    @model_validator(mode="after")
    def _certificate_bound(self) -> "Verdict":
        if self.certificate is not None:
            bound = self.s + 3 * self.epsilon_used
            if not self.certificate.objective <= bound < self.c:
                raise ValueError(
                    f"certificate objective {self.certificate.objective} must be <= {bound} < {self.c}"
                )
        return self


class EstimateMethod(str, Enum):
    GRID = "grid"
    BINARY_SEARCH = "binary-search"


class ValueEstimate(BaseModel):
    model_config = {"frozen": True}

    lower: Rational
    upper: Rational
    epsilon: Rational
    method: EstimateMethod
    decisions: int = 0
    rounds: int = 0

    @model_validator(mode="after")
    def _ordered(self) -> "ValueEstimate":
        if not ZERO <= self.lower <= self.upper <= ONE:
            raise ValueError(f"need 0 <= lower <= upper <= 1, got [{self.lower}, {self.upper}]")
        if self.upper - self.lower > self.epsilon:
            raise ValueError("interval wider than epsilon")
        return self


class ProofSystemCheck(BaseModel):
    """Completeness/soundness view of one compiled verifier input"""

    model_config = {"frozen": True}

    verifier: str
    value: Rational = Field(..., description="exact no-signaling value of the induced game")
    completeness: Rational
    soundness: Rational
    meets_completeness: bool
    meets_soundness: bool
