"""
Explicit two-prover one-round verifier description
"""
from typing import Dict, FrozenSet, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from src.utils.errors import DimensionMismatch, IncompleteSpec


class VerifierSpec(BaseModel):
    """
    Truth-table verifier: random string r picks the question pair, and the
    listed (r, a1, a2) triples are the accepting ones.
    """

    model_config = {"frozen": True}

    name: str = "verifier"
    randomness_bits: int = Field(..., ge=0, description="l; the verifier draws r uniformly from {0,1}^l")
    question_map: Dict[int, Tuple[int, int]] = Field(..., description="r -> (q1, q2)")
    accepting: FrozenSet[Tuple[int, int, int]] = Field(default_factory=frozenset, description="(r, a1, a2) with M_R = 1")
    a1_count: int = Field(..., gt=0)
    a2_count: int = Field(..., gt=0)
    q1_count: Optional[int] = Field(None, gt=0, description="defaults to the largest mapped q1 + 1")
    q2_count: Optional[int] = Field(None, gt=0, description="defaults to the largest mapped q2 + 1")

    @model_validator(mode="after")
    def _check_tables(self) -> "VerifierSpec":
        for r, (q1, q2) in self.question_map.items():
            if r < 0 or r.bit_length() > self.randomness_bits:
                raise DimensionMismatch(f"random string {r} needs more than {self.randomness_bits} bits")
            if q1 < 0 or q2 < 0:
                raise DimensionMismatch(f"negative question index at r={r}")
            if self.q1_count is not None and q1 >= self.q1_count:
                raise DimensionMismatch(f"q1={q1} at r={r} exceeds q1_count={self.q1_count}")
            if self.q2_count is not None and q2 >= self.q2_count:
                raise DimensionMismatch(f"q2={q2} at r={r} exceeds q2_count={self.q2_count}")
        for r, a1, a2 in self.accepting:
            if r not in self.question_map:
                raise IncompleteSpec(f"accepting triple for r={r} which has no question pair")
            if not (0 <= a1 < self.a1_count and 0 <= a2 < self.a2_count):
                raise DimensionMismatch(f"answer pair ({a1}, {a2}) outside alphabets at r={r}")
        return self

    @property
    def randomness(self) -> int:
        return 1 << self.randomness_bits

    def resolved_question_counts(self) -> Tuple[int, int]:
        n1 = self.q1_count or 1 + max((q1 for q1, _ in self.question_map.values()), default=0)
        n2 = self.q2_count or 1 + max((q2 for _, q2 in self.question_map.values()), default=0)
        return n1, n2
