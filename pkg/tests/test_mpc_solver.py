from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.lp.mpc_reduction import build_mpc_instance
from src.models.mpc import MPCInstance, OutcomeKind
from src.solvers.exact_simplex import exact_mpc_feasibility
from src.solvers.mpc_solver import MixedPackingCoveringSolver, check_epsilon, solve_mpc, verify_approx_solution
from src.utils.config import NSValueConfig
from src.utils.errors import DimensionMismatch, InvalidEpsilon, NegativeEntry
from tests.helpers import capped_config, iterative_config, one_by_one, small_instances

TENTH = Fraction(1, 10)


class TestVerify:
    def test_exact_solution(self):
        assert verify_approx_solution(one_by_one(Fraction(1)), [1], 1)

    def test_uncovered(self):
        assert not verify_approx_solution(one_by_one(Fraction(1)), [0], 1)

    def test_packing_slack(self):
        instance = one_by_one(Fraction(1))
        assert not verify_approx_solution(instance, [Fraction(11, 10)], 1)
        assert verify_approx_solution(instance, [Fraction(11, 10)], Fraction(11, 10))

    def test_negative_entry_fails(self):
        instance = MPCInstance(n_packing=0, n_covering=0, n_columns=1)
        assert not verify_approx_solution(instance, [-1], 1)

    def test_arguments(self):
        instance = one_by_one(Fraction(1))
        with pytest.raises(DimensionMismatch):
            verify_approx_solution(instance, [1, 1], 1)
        with pytest.raises(InvalidEpsilon):
            verify_approx_solution(instance, [1], Fraction(1, 2))


@pytest.mark.parametrize("eps", [0, 1, Fraction(3, 2), Fraction(-1, 10)])
def test_epsilon_range(eps):
    with pytest.raises(InvalidEpsilon):
        check_epsilon(eps)


def test_negative_data_is_rejected():
    with pytest.raises(NegativeEntry):
        MPCInstance(n_packing=1, n_covering=0, n_columns=1, A=((0, 0, Fraction(-1)),), b=(Fraction(1),))


def test_one_variable_feasible():
    outcome = solve_mpc(one_by_one(Fraction(1)), TENTH)
    assert outcome.kind is OutcomeKind.APPROX
    assert 1 <= outcome.x[0] <= Fraction(11, 10)


def test_one_variable_infeasible():
    outcome = solve_mpc(one_by_one(Fraction(1, 2)), TENTH)
    assert outcome.kind is OutcomeKind.INFEASIBLE
    assert "certificate" in outcome.reason


def test_no_covering_rows():
    instance = MPCInstance(n_packing=1, n_covering=0, n_columns=2, A=((0, 0, Fraction(1)),), b=(Fraction(1),))
    outcome = solve_mpc(instance, TENTH)
    assert outcome.kind is OutcomeKind.APPROX
    assert outcome.x == (0, 0)


def test_zero_demand_rows_are_dropped():
    instance = MPCInstance(
        n_packing=1, n_covering=1, n_columns=1,
        A=((0, 0, Fraction(1)),), b=(Fraction(1),), C=((0, 0, Fraction(1)),), d=(Fraction(0),),
    )
    assert solve_mpc(instance, TENTH).kind is OutcomeKind.APPROX


def test_zero_budget_kills_the_only_cover():
    instance = one_by_one(Fraction(0))
    outcome = solve_mpc(instance, TENTH)
    assert outcome.kind is OutcomeKind.INFEASIBLE
    assert "no usable column" in outcome.reason


def test_covering_without_binding_packing():
    instance = MPCInstance(
        n_packing=0, n_covering=2, n_columns=2,
        C=((0, 0, Fraction(2)), (1, 0, Fraction(1)), (1, 1, Fraction(1))), d=(Fraction(1), Fraction(3)),
    )
    outcome = solve_mpc(instance, TENTH)
    assert outcome.kind is OutcomeKind.APPROX
    assert verify_approx_solution(instance, outcome.x, 1)


def test_exact_mode():
    config = NSValueConfig()
    config.solver.exact_mode = True
    outcome = MixedPackingCoveringSolver(config).solve(one_by_one(Fraction(1)), TENTH)
    assert outcome.kind is OutcomeKind.APPROX
    assert outcome.x == (1,)
    assert "exact" in outcome.reason


def test_sparse_and_dense_paths_agree():
    instance = one_by_one(Fraction(1, 2))
    sparse_config = NSValueConfig()
    sparse_config.solver.dense_max_entries = 0
    assert MixedPackingCoveringSolver(sparse_config).solve(instance, TENTH).kind is OutcomeKind.INFEASIBLE


def test_guess_game_instance_is_approx_feasible(g_guess):
    instance = build_mpc_instance(g_guess, Fraction(3, 5))
    outcome = MixedPackingCoveringSolver(capped_config()).solve(instance, Fraction(1, 20))
    assert outcome.kind is OutcomeKind.APPROX
    assert verify_approx_solution(instance, outcome.x, Fraction(21, 20))


@pytest.mark.parametrize("s, kind", [(Fraction(3, 5), OutcomeKind.APPROX), (Fraction(1, 5), OutcomeKind.INFEASIBLE)])
def test_iterative_path_on_guess_instance(g_guess, s, kind):
    instance = build_mpc_instance(g_guess, s)
    outcome = MixedPackingCoveringSolver(iterative_config()).solve(instance, Fraction(1, 20))
    assert outcome.kind is kind
    assert "fallback" not in outcome.reason


def test_trivial_game_instance_at_zero_is_infeasible(g_triv):
    outcome = MixedPackingCoveringSolver(capped_config()).solve(build_mpc_instance(g_triv, 0), TENTH)
    assert outcome.kind is OutcomeKind.INFEASIBLE


def _check_contract(instance: MPCInstance, eps: Fraction, config: NSValueConfig) -> None:
    outcome = MixedPackingCoveringSolver(config).solve(instance, eps)
    feasible = exact_mpc_feasibility(instance) is not None
    if outcome.kind is OutcomeKind.APPROX:
        assert verify_approx_solution(instance, outcome.x, 1 + eps)
    else:
        assert not feasible


@given(small_instances(), st.sampled_from([Fraction(1, 5), Fraction(1, 10)]))
def test_contract_on_random_instances(instance, eps):
    _check_contract(instance, eps, capped_config())


@pytest.mark.slow
@settings(max_examples=200)
@given(small_instances(max_rows=8, max_columns=40), st.sampled_from([Fraction(1, 5), Fraction(1, 20), Fraction(1, 100)]))
def test_contract_sweep(instance, eps):
    _check_contract(instance, eps, iterative_config())


def test_rounds_are_reproducible(g_guess):
    instance = build_mpc_instance(g_guess, Fraction(3, 5))
    first = MixedPackingCoveringSolver(capped_config()).solve(instance, TENTH)
    second = MixedPackingCoveringSolver(capped_config()).solve(instance, TENTH)
    assert first == second
