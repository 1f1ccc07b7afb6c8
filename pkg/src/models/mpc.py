"""
Mixed packing and covering instances and solver outcomes
"""
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy import sparse

from src.utils.errors import DimensionMismatch, NegativeEntry
from src.utils.rationals import Rational

Entry = Tuple[int, int, Rational]


class MPCInstance(BaseModel):
    """
    Find x >= 0 with A x <= b and C x >= d, all data nonnegative. Matrices are
    stored sparsely as (row, column, value) triples in exact arithmetic.
    """

    model_config = {"frozen": True}

    n_packing: int = Field(..., ge=0, description="M1")
    n_covering: int = Field(..., ge=0, description="M2")
    n_columns: int = Field(..., ge=0, description="N")
    A: Tuple[Entry, ...] = ()
    b: Tuple[Rational, ...] = ()
    C: Tuple[Entry, ...] = ()
    d: Tuple[Rational, ...] = ()
    column_names: Tuple[str, ...] = ()
    packing_names: Tuple[str, ...] = ()
    covering_names: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def _check_data(self) -> "MPCInstance":
        if len(self.b) != self.n_packing or len(self.d) != self.n_covering:
            raise DimensionMismatch("rhs vectors do not match the declared row counts")
        for label, entries, rows in (("A", self.A, self.n_packing), ("C", self.C, self.n_covering)):
            for i, j, value in entries:
                if not (0 <= i < rows and 0 <= j < self.n_columns):
                    raise DimensionMismatch(f"{label}[{i},{j}] outside {rows}x{self.n_columns}")
                if value < 0:
                    raise NegativeEntry(f"{label}[{i},{j}] = {value} is negative")
        for label, vector in (("b", self.b), ("d", self.d)):
            for i, value in enumerate(vector):
                if value < 0:
                    raise NegativeEntry(f"{label}[{i}] = {value} is negative")
        if self.column_names and len(self.column_names) != self.n_columns:
            raise DimensionMismatch("column_names must name every column")
        return self

    def packing_matrix(self) -> sparse.csr_matrix:
        return _to_csr(self.A, self.n_packing, self.n_columns)

    def covering_matrix(self) -> sparse.csr_matrix:
        return _to_csr(self.C, self.n_covering, self.n_columns)

    def packing_rows(self) -> List[List[Tuple[int, Fraction]]]:
        return _group_rows(self.A, self.n_packing)

    def covering_rows(self) -> List[List[Tuple[int, Fraction]]]:
        return _group_rows(self.C, self.n_covering)


def _to_csr(entries: Tuple[Entry, ...], rows: int, cols: int) -> sparse.csr_matrix:
    if not entries:
        return sparse.csr_matrix((rows, cols), dtype=np.float64)
    i, j, v = zip(*entries)
    matrix = sparse.coo_matrix(
        (np.array([float(x) for x in v]), (np.array(i), np.array(j))),
        shape=(rows, cols),
    )
    # duplicates are summed; canonical order keeps matvecs reproducible
    matrix = matrix.tocsr()
    matrix.sum_duplicates()
    matrix.sort_indices()
    return matrix


def _group_rows(entries: Tuple[Entry, ...], rows: int) -> List[List[Tuple[int, Fraction]]]:
    grouped: List[List[Tuple[int, Fraction]]] = [[] for _ in range(rows)]
    for i, j, value in entries:
        grouped[i].append((j, value))
    return grouped


class OutcomeKind(str, Enum):
    INFEASIBLE = "Infeasible"
    APPROX = "Approx"


class MPCOutcome(BaseModel):
    model_config = {"frozen": True}

    kind: OutcomeKind
    x: Optional[Tuple[Rational, ...]] = Field(None, description="present iff kind is Approx")
    rounds: int = 0
    trials: int = 0
    epsilon: Rational
    reason: str = ""

    @model_validator(mode="after")
    def _x_iff_approx(self) -> "MPCOutcome":
        if (self.kind is OutcomeKind.APPROX) != (self.x is not None):
            raise ValueError("x must be present exactly when the outcome is Approx")
        return self
