"""
Solution objects passed between LP pipeline stages
"""
from typing import Dict, Tuple

from pydantic import BaseModel, Field

from src.utils.rationals import Rational, exact_sum


class RelaxedSolution(BaseModel):
    """A (p~, p1, p2) triple feasible for the relaxed strategy program"""

    model_config = {"frozen": True}

    p_tilde: Dict[Tuple[int, int, int, int], Rational] = Field(..., description="keyed (q1,q2,a1,a2), omitted = 0")
    p1: Dict[Tuple[int, int], Rational] = Field(..., description="p1(a1|q1) keyed (q1,a1), omitted = 0")
    p2: Dict[Tuple[int, int], Rational] = Field(..., description="p2(a2|q2) keyed (q2,a2), omitted = 0")


class ComplementedCertificate(BaseModel):
    """
    A point of the complemented dual program (ybar1, ybar2, z1, z2). When it is
    feasible its objective is an upper bound on the no-signaling value.
    """

    model_config = {"frozen": True}

    ybar1: Dict[Tuple[int, int, int], Rational] = Field(..., description="keyed (q1,q2,a1)")
    ybar2: Dict[Tuple[int, int, int], Rational] = Field(..., description="keyed (q1,q2,a2)")
    z1: Dict[int, Rational]
    z2: Dict[int, Rational]

    @property
    def objective(self) -> Rational:
        return exact_sum(self.z1.values()) + exact_sum(self.z2.values())
