"""
Exact rational two-phase simplex with Bland's rule

The oracle behind exact_value and the pipeline equivalence checks. Tableau
entries are Fractions, so every reported optimum is exact; Bland's rule
(lowest-index entering column, lowest-index leaving basic variable on ties)
rules out cycling.
"""
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from src.models.linear_program import LinearProgram, LPSolution, LPStatus, Relation, Sense
from src.models.mpc import MPCInstance
from src.utils.errors import SolverError, TooLargeForExact

logger = structlog.get_logger()

Row = Tuple[Dict[int, Fraction], Relation, Fraction]


class _Tableau:
    """Dense tableau; the last entry of every row is the right-hand side"""

    def __init__(self, rows: List[list], basis: List[int], width: int):
        self.rows = rows
        self.basis = basis
        self.width = width
        self.pivots = 0

    def pivot(self, i: int, j: int, objective: list) -> None:
        prow = self.rows[i]
        piv = Fraction(prow[j])
        if piv != 1:
            prow = [v / piv if v else 0 for v in prow]
            self.rows[i] = prow
        nonzero = [col for col, v in enumerate(prow) if v]
        for k, row in enumerate(self.rows):
            if k == i:
                continue
            factor = row[j]
            if factor:
                for col in nonzero:
                    row[col] -= factor * prow[col]
        factor = objective[j]
        if factor:
            for col in nonzero:
                objective[col] -= factor * prow[col]
        self.basis[i] = j
        self.pivots += 1

    def iterate(self, objective: list, allowed: Sequence[bool], max_pivots: Optional[int]) -> LPStatus:
        """Minimize; objective holds reduced costs and -value in its last slot"""
        while True:
            entering = next((j for j in range(self.width) if allowed[j] and objective[j] < 0), None)
            if entering is None:
                return LPStatus.OPTIMAL
            leaving = None
            best: Optional[Tuple[Fraction, int]] = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    key = (Fraction(row[-1]) / row[entering], self.basis[i])
                    if best is None or key < best:
                        best, leaving = key, i
            if leaving is None:
                return LPStatus.UNBOUNDED
            if max_pivots is not None and self.pivots >= max_pivots:
                raise SolverError(f"exact simplex exceeded {max_pivots} pivots")
            self.pivot(leaving, entering, objective)

    def objective_row(self, costs: Dict[int, Fraction]) -> list:
        objective = [0] * (self.width + 1)
        for col, cost in costs.items():
            objective[col] = cost
        for i, row in enumerate(self.rows):
            cost = costs.get(self.basis[i])
            if cost:
                for col, v in enumerate(row):
                    if v:
                        objective[col] -= cost * v
        return objective


class ExactSimplexSolver:
    """Solves LinearProgram values exactly, or reports infeasible / unbounded"""

    def __init__(self, max_variables: int = 50_000, max_pivots: Optional[int] = None):
        self.max_variables = max_variables
        self.max_pivots = max_pivots
        self.logger = structlog.get_logger().bind(solver="exact-simplex")

    def solve(self, lp: LinearProgram) -> LPSolution:
        if len(lp.variables) > self.max_variables:
            raise TooLargeForExact(
                f"{len(lp.variables)} variables exceed the exact oracle guard of {self.max_variables}"
            )

        # free variables split into a positive and a negative column
        columns: Dict[str, List[Tuple[int, int]]] = {}
        width = 0
        for var in lp.variables:
            columns[var.name] = [(width, 1)]
            width += 1
            if var.free:
                columns[var.name].append((width, -1))
                width += 1

        rows: List[Row] = []
        for constraint in lp.constraints:
            coeffs: Dict[int, Fraction] = {}
            for name, coef in constraint.coefficients.items():
                for col, sign in columns[name]:
                    coeffs[col] = coeffs.get(col, 0) + sign * coef
            rows.append((coeffs, constraint.relation, constraint.rhs))

        direction = -1 if lp.sense is Sense.MAXIMIZE else 1
        costs: Dict[int, Fraction] = {}
        for name, coef in lp.objective.items():
            for col, sign in columns[name]:
                costs[col] = costs.get(col, 0) + direction * sign * coef

        status, point, pivots = self._run(width, rows, costs)
        if status is not LPStatus.OPTIMAL:
            self.logger.debug("Exact solve finished", stage=lp.stage.value, status=status.value, pivots=pivots)
            return LPSolution(status=status, pivots=pivots)

        values = {
            name: sum((sign * point[col] for col, sign in cols), Fraction(0))
            for name, cols in columns.items()
        }
        objective = lp.objective_value(values)
        self.logger.debug("Exact solve finished", stage=lp.stage.value, objective=str(objective), pivots=pivots)
        return LPSolution(status=LPStatus.OPTIMAL, objective=objective, values=values, pivots=pivots)

    def feasible_point(self, width: int, rows: List[Row]) -> Optional[List[Fraction]]:
        """Phase 1 only: some x >= 0 satisfying the rows, or None"""
        status, point, _ = self._run(width, rows, {})
        return point if status is LPStatus.OPTIMAL else None

    def _run(self, width: int, rows: List[Row], costs: Dict[int, Fraction]) -> Tuple[LPStatus, List[Fraction], int]:
        normalized = []
        for coeffs, relation, rhs in rows:
            if rhs < 0:
                coeffs = {col: -v for col, v in coeffs.items()}
                relation = relation.flipped()
                rhs = -rhs
            normalized.append((coeffs, relation, rhs))

        n_slack = sum(1 for _, rel, _ in normalized if rel is not Relation.EQ)
        n_artificial = sum(1 for _, rel, _ in normalized if rel is not Relation.LE)
        total = width + n_slack + n_artificial

        tab_rows: List[list] = []
        basis: List[int] = []
        artificial = [False] * total
        next_slack = width
        next_artificial = width + n_slack
        for coeffs, relation, rhs in normalized:
            row: list = [0] * (total + 1)
            for col, v in coeffs.items():
                row[col] = v
            row[-1] = rhs
            if relation is Relation.LE:
                row[next_slack] = 1
                basis.append(next_slack)
                next_slack += 1
            else:
                if relation is Relation.GE:
                    row[next_slack] = -1
                    next_slack += 1
                row[next_artificial] = 1
                artificial[next_artificial] = True
                basis.append(next_artificial)
                next_artificial += 1
            tab_rows.append(row)

        tableau = _Tableau(tab_rows, basis, total)

        if n_artificial:
            phase_one = tableau.objective_row({col: Fraction(1) for col in range(total) if artificial[col]})
            tableau.iterate(phase_one, [True] * total, self.max_pivots)
            if -phase_one[-1] > 0:
                return LPStatus.INFEASIBLE, [], tableau.pivots

            # drive zero-level artificials out of the basis; drop redundant rows
            redundant = []
            for i in range(len(tableau.rows)):
                if not artificial[tableau.basis[i]]:
                    continue
                row = tableau.rows[i]
                col = next((j for j in range(total) if not artificial[j] and row[j]), None)
                if col is None:
                    redundant.append(i)
                else:
                    tableau.pivot(i, col, phase_one)
            for i in reversed(redundant):
                del tableau.rows[i]
                del tableau.basis[i]

        allowed = [not flag for flag in artificial]
        phase_two = tableau.objective_row(costs)
        status = tableau.iterate(phase_two, allowed, self.max_pivots)
        if status is not LPStatus.OPTIMAL:
            return status, [], tableau.pivots

        point = [Fraction(0)] * total
        for i, col in enumerate(tableau.basis):
            point[col] = Fraction(tableau.rows[i][-1])
        return LPStatus.OPTIMAL, point[:width], tableau.pivots


def solve_lp(lp: LinearProgram, solver: Optional[ExactSimplexSolver] = None) -> LPSolution:
    return (solver or ExactSimplexSolver()).solve(lp)


def exact_mpc_feasibility(
    instance: MPCInstance, solver: Optional[ExactSimplexSolver] = None
) -> Optional[List[Fraction]]:
    """An exact x >= 0 with A x <= b and C x >= d, or None when there is none"""
    solver = solver or ExactSimplexSolver()
    if instance.n_columns > solver.max_variables:
        raise TooLargeForExact(f"{instance.n_columns} columns exceed the exact oracle guard")
    rows: List[Row] = []
    for i, entries in enumerate(instance.packing_rows()):
        rows.append(({j: v for j, v in entries}, Relation.LE, instance.b[i]))
    for i, entries in enumerate(instance.covering_rows()):
        rows.append(({j: v for j, v in entries}, Relation.GE, instance.d[i]))
    return solver.feasible_point(instance.n_columns, rows)
