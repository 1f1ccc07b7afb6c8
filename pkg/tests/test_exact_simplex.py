from fractions import Fraction

import pytest

from src.models.linear_program import Constraint, LinearProgram, LPStatus, Relation, Sense, Variable
from src.models.mpc import MPCInstance
from src.solvers.exact_simplex import ExactSimplexSolver, exact_mpc_feasibility, solve_lp
from src.utils.errors import ShapeMismatch, SolverError, TooLargeForExact
from tests.helpers import one_by_one


def program(sense, rows, objective, free=()):
    names = sorted({name for row in rows for name in row[0]} | set(objective))
    return LinearProgram(
        sense=sense,
        variables=tuple(Variable(block=name, free=name in free) for name in names),
        objective={name: Fraction(coef) for name, coef in objective.items()},
        constraints=tuple(
            Constraint(block="row", index=(k,), coefficients={n: Fraction(c) for n, c in coeffs.items()},
                       relation=relation, rhs=Fraction(rhs))
            for k, (coeffs, relation, rhs) in enumerate(rows)
        ),
    )


def test_textbook_maximization():
    # max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
    lp = program(Sense.MAXIMIZE, [
        ({"x": 1}, Relation.LE, 4),
        ({"y": 2}, Relation.LE, 12),
        ({"x": 3, "y": 2}, Relation.LE, 18),
    ], {"x": 3, "y": 5})
    solution = solve_lp(lp)
    assert solution.status is LPStatus.OPTIMAL
    assert solution.objective == 36
    assert solution.values == {"x": 2, "y": 6}


def test_rational_optimum_is_exact():
    # min x + y st 3x + y >= 1, x + 3y >= 1  ->  1/2 at (1/4, 1/4)
    lp = program(Sense.MINIMIZE, [
        ({"x": 3, "y": 1}, Relation.GE, 1),
        ({"x": 1, "y": 3}, Relation.GE, 1),
    ], {"x": 1, "y": 1})
    solution = solve_lp(lp)
    assert solution.objective == Fraction(1, 2)
    assert solution.values == {"x": Fraction(1, 4), "y": Fraction(1, 4)}


def test_equality_and_free_variable():
    # max -u st u = -3 (u free)
    lp = program(Sense.MAXIMIZE, [({"u": 1}, Relation.EQ, -3)], {"u": -1}, free={"u"})
    solution = solve_lp(lp)
    assert solution.objective == 3
    assert solution.values["u"] == -3


def test_infeasible():
    lp = program(Sense.MAXIMIZE, [({"x": 1}, Relation.LE, 1), ({"x": 1}, Relation.GE, 2)], {"x": 1})
    assert solve_lp(lp).status is LPStatus.INFEASIBLE


def test_unbounded():
    lp = program(Sense.MAXIMIZE, [({"x": 1, "y": -1}, Relation.LE, 1)], {"x": 1})
    assert solve_lp(lp).status is LPStatus.UNBOUNDED


def test_redundant_equalities():
    lp = program(Sense.MINIMIZE, [
        ({"x": 1, "y": 1}, Relation.EQ, 1),
        ({"x": 2, "y": 2}, Relation.EQ, 2),
    ], {"x": 1, "y": 2})
    assert solve_lp(lp).objective == 1


def test_variable_guard():
    lp = program(Sense.MAXIMIZE, [({"x": 1, "y": 1}, Relation.LE, 1)], {"x": 1})
    with pytest.raises(TooLargeForExact):
        ExactSimplexSolver(max_variables=1).solve(lp)


def test_pivot_guard():
    lp = program(Sense.MAXIMIZE, [({"x": 1}, Relation.LE, 4), ({"y": 1}, Relation.LE, 4)], {"x": 1, "y": 1})
    with pytest.raises(SolverError):
        ExactSimplexSolver(max_pivots=1).solve(lp)


def test_undeclared_variable_is_rejected():
    with pytest.raises(ShapeMismatch):
        LinearProgram(sense=Sense.MAXIMIZE, variables=(), objective={"x": Fraction(1)})


def test_mpc_feasibility():
    assert exact_mpc_feasibility(one_by_one(Fraction(1))) == [Fraction(1)]
    assert exact_mpc_feasibility(one_by_one(Fraction(1, 2))) is None


def test_mpc_feasibility_guard():
    instance = MPCInstance(n_packing=0, n_covering=0, n_columns=3)
    with pytest.raises(TooLargeForExact):
        exact_mpc_feasibility(instance, ExactSimplexSolver(max_variables=2))
