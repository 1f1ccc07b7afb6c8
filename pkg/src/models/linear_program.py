"""
Sparse exact linear programs and their solutions
"""
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from src.utils.errors import ShapeMismatch
from src.utils.rationals import ZERO, Rational


class Sense(str, Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="

    def flipped(self) -> "Relation":
        return {Relation.LE: Relation.GE, Relation.GE: Relation.LE}.get(self, self)


class LPStage(str, Enum):
    """Which program of the reduction chain an LP is"""
    PRIMAL = "primal"
    RELAXED = "relaxed"
    SCALED = "scaled"
    DUAL = "dual"
    FINAL = "final"
    EXTERNAL = "external"


def indexed_name(block: str, index: Tuple[int, ...]) -> str:
    return f"{block}[{','.join(str(i) for i in index)}]"


class Variable(BaseModel):
    model_config = {"frozen": True}

    block: str = Field(..., description="variable family, e.g. p, p1, x, y1, ybar2, z1")
    index: Tuple[int, ...] = ()
    free: bool = False

    @property
    def name(self) -> str:
        return indexed_name(self.block, self.index) if self.index else self.block


class Constraint(BaseModel):
    model_config = {"frozen": True}

    block: str
    index: Tuple[int, ...] = ()
    coefficients: Dict[str, Rational] = Field(..., description="variable name -> coefficient")
    relation: Relation
    rhs: Rational

    @property
    def name(self) -> str:
        return indexed_name(self.block, self.index) if self.index else self.block

    def evaluate(self, values: Dict[str, Fraction]) -> Fraction:
        total = ZERO
        for var, coef in self.coefficients.items():
            total += coef * values.get(var, ZERO)
        return total

    def is_satisfied(self, values: Dict[str, Fraction]) -> bool:
        lhs = self.evaluate(values)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


class LinearProgram(BaseModel):
    """
    A linear program over named variables. Variables are nonnegative unless
    flagged free; constraints are sparse rows with a relation and a rhs.
    """

    model_config = {"frozen": True}

    stage: LPStage = LPStage.EXTERNAL
    sense: Sense
    variables: Tuple[Variable, ...]
    objective: Dict[str, Rational] = Field(default_factory=dict)
    constraints: Tuple[Constraint, ...] = ()
    dimensions: Optional[Tuple[int, int, int, int]] = Field(
        None, description="(n1, n2, m1, m2) of the game the program was built from"
    )

    @model_validator(mode="after")
    def _rows_reference_declared_variables(self) -> "LinearProgram":
        declared = self.variable_index
        if len(declared) != len(self.variables):
            raise ShapeMismatch("duplicate variable names")
        for var in self.objective:
            if var not in declared:
                raise ShapeMismatch(f"objective references undeclared variable {var}")
        for row in self.constraints:
            for var in row.coefficients:
                if var not in declared:
                    raise ShapeMismatch(f"row {row.name} references undeclared variable {var}")
        return self

    @cached_property
    def variable_index(self) -> Dict[str, int]:
        return {var.name: position for position, var in enumerate(self.variables)}

    def block(self, name: str) -> List[Variable]:
        return [var for var in self.variables if var.block == name]

    def rows(self, block: str) -> List[Constraint]:
        return [row for row in self.constraints if row.block == block]

    def objective_value(self, values: Dict[str, Fraction]) -> Fraction:
        total = ZERO
        for var, coef in self.objective.items():
            total += coef * values.get(var, ZERO)
        return total

    def violations(self, values: Dict[str, Fraction]) -> List[str]:
        """Names of violated rows and sign restrictions (empty iff feasible)"""
        broken = [
            var.name for var in self.variables
            if not var.free and values.get(var.name, ZERO) < 0
        ]
        broken.extend(row.name for row in self.constraints if not row.is_satisfied(values))
        return broken


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LPSolution(BaseModel):
    model_config = {"frozen": True}

    status: LPStatus
    objective: Optional[Rational] = None
    values: Dict[str, Rational] = Field(default_factory=dict)
    pivots: int = 0
