"""
Game and strategy data models
"""
from fractions import Fraction
from typing import Dict, Iterator, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from src.utils.errors import (
    DimensionMismatch,
    NonNormalizedDistribution,
    PayoffOutOfRange,
    StrategyNotNormalized,
)
from src.utils.rationals import ONE, ZERO, Rational, exact_sum

QuestionPair = Tuple[int, int]
AnswerIndex = Tuple[int, int, int, int]


def _drop_zeros(table: dict) -> dict:
    return {key: value for key, value in sorted(table.items()) if value != 0}


def _check_range(key: tuple, bounds: tuple, what: str) -> None:
    for value, bound in zip(key, bounds):
        if not 0 <= value < bound:
            raise DimensionMismatch(f"{what} index {key} outside dimensions {bounds}")


class GameTables(BaseModel):
    """Raw game tables as read from a file or built by hand, before validation"""

    q1_count: int = Field(..., ge=0)
    q2_count: int = Field(..., ge=0)
    a1_count: int = Field(..., ge=0)
    a2_count: int = Field(..., ge=0)
    pi: Dict[QuestionPair, Rational] = Field(default_factory=dict, description="omitted entries are 0")
    payoff: Dict[AnswerIndex, Rational] = Field(default_factory=dict, description="omitted entries are 0")


class Game(BaseModel):
    """A two-prover one-round game G = (Q1, Q2, A1, A2, pi, R)"""

    model_config = {"frozen": True}

    q1_count: int = Field(..., gt=0)
    q2_count: int = Field(..., gt=0)
    a1_count: int = Field(..., gt=0)
    a2_count: int = Field(..., gt=0)
    pi: Dict[QuestionPair, Rational] = Field(..., description="question distribution, zeros omitted")
    payoff: Dict[AnswerIndex, Rational] = Field(..., description="R(a1,a2|q1,q2) keyed (q1,q2,a1,a2)")

    # Pruning map: original index of every retained question
    q1_labels: Tuple[int, ...] = ()
    q2_labels: Tuple[int, ...] = ()
    original_q1_count: Optional[int] = None
    original_q2_count: Optional[int] = None

    @field_validator("pi", "payoff")
    @classmethod
    def _canonical(cls, table: dict) -> dict:
        return _drop_zeros(table)

    @model_validator(mode="after")
    def _check_invariants(self) -> "Game":
        for key, prob in self.pi.items():
            _check_range(key, (self.q1_count, self.q2_count), "pi")
            if prob < 0:
                raise NonNormalizedDistribution(f"pi{key} = {prob} is negative")
        total = exact_sum(self.pi.values())
        if total != ONE:
            raise NonNormalizedDistribution(f"question distribution sums to {total}, not 1")

        for key, value in self.payoff.items():
            _check_range(key, self.dimensions, "payoff")
            if not ZERO <= value <= ONE:
                raise PayoffOutOfRange(f"R{key} = {value} is outside [0, 1]")

        pi1, pi2 = self.question_marginals()
        for q1, mass in enumerate(pi1):
            if mass == 0:
                raise NonNormalizedDistribution(f"question q1={q1} has zero marginal; prune it with validate_game")
        for q2, mass in enumerate(pi2):
            if mass == 0:
                raise NonNormalizedDistribution(f"question q2={q2} has zero marginal; prune it with validate_game")

        if self.q1_labels and len(self.q1_labels) != self.q1_count:
            raise DimensionMismatch("q1_labels must list one original index per question")
        if self.q2_labels and len(self.q2_labels) != self.q2_count:
            raise DimensionMismatch("q2_labels must list one original index per question")
        return self

    @property
    def dimensions(self) -> Tuple[int, int, int, int]:
        return (self.q1_count, self.q2_count, self.a1_count, self.a2_count)

    @property
    def size(self) -> int:
        return self.q1_count * self.q2_count * self.a1_count * self.a2_count

    @property
    def was_pruned(self) -> bool:
        return (
            self.original_q1_count not in (None, self.q1_count)
            or self.original_q2_count not in (None, self.q2_count)
        )

    def pi_of(self, q1: int, q2: int) -> Fraction:
        return self.pi.get((q1, q2), ZERO)

    def payoff_of(self, q1: int, q2: int, a1: int, a2: int) -> Fraction:
        return self.payoff.get((q1, q2, a1, a2), ZERO)

    def flat_index(self, q1: int, q2: int, a1: int, a2: int) -> int:
        """Row-major position of (q1, q2, a1, a2)"""
        return ((q1 * self.q2_count + q2) * self.a1_count + a1) * self.a2_count + a2

    def question_marginals(self) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
        pi1 = [ZERO] * self.q1_count
        pi2 = [ZERO] * self.q2_count
        for (q1, q2), prob in self.pi.items():
            pi1[q1] += prob
            pi2[q2] += prob
        return tuple(pi1), tuple(pi2)

    def question_pairs(self) -> Iterator[QuestionPair]:
        for q1 in range(self.q1_count):
            for q2 in range(self.q2_count):
                yield q1, q2

    def answer_indices(self) -> Iterator[AnswerIndex]:
        for q1 in range(self.q1_count):
            for q2 in range(self.q2_count):
                for a1 in range(self.a1_count):
                    for a2 in range(self.a2_count):
                        yield q1, q2, a1, a2


class Strategy(BaseModel):
    """Conditional distributions p(a1,a2|q1,q2), one per question pair"""

    model_config = {"frozen": True}

    q1_count: int = Field(..., gt=0)
    q2_count: int = Field(..., gt=0)
    a1_count: int = Field(..., gt=0)
    a2_count: int = Field(..., gt=0)
    p: Dict[AnswerIndex, Rational] = Field(..., description="p(a1,a2|q1,q2) keyed (q1,q2,a1,a2), zeros omitted")

    @field_validator("p")
    @classmethod
    def _canonical(cls, table: dict) -> dict:
        return _drop_zeros(table)

    @model_validator(mode="after")
    def _check_normalized(self) -> "Strategy":
        totals: Dict[QuestionPair, Fraction] = {}
        for key, prob in self.p.items():
            _check_range(key, self.dimensions, "strategy")
            if prob < 0:
                raise StrategyNotNormalized(f"p{key} = {prob} is negative")
            totals[key[:2]] = totals.get(key[:2], ZERO) + prob
        for q1 in range(self.q1_count):
            for q2 in range(self.q2_count):
                total = totals.get((q1, q2), ZERO)
                if total != ONE:
                    raise StrategyNotNormalized(f"p(.|{q1},{q2}) sums to {total}, not 1")
        return self

    @property
    def dimensions(self) -> Tuple[int, int, int, int]:
        return (self.q1_count, self.q2_count, self.a1_count, self.a2_count)

    def prob(self, q1: int, q2: int, a1: int, a2: int) -> Fraction:
        return self.p.get((q1, q2, a1, a2), ZERO)


class SignalingReport(BaseModel):
    """Outcome of a no-signaling check"""

    model_config = {"frozen": True}

    is_no_signaling: bool
    worst_violation: Rational
    tolerance: Rational = ZERO
    witness: Optional[Tuple[int, int, int, int, int]] = Field(
        None, description="(direction, q, a, q_other, q_other') attaining the worst violation"
    )

    @model_validator(mode="after")
    def _consistent(self) -> "SignalingReport":
        if self.is_no_signaling != (self.worst_violation <= self.tolerance):
            raise ValueError("is_no_signaling must agree with worst_violation <= tolerance")
        return self
