from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from src.games.game_core import acceptance_probability, check_no_signaling, strategy_marginals, validate_game
from src.lp.completion import complete_strategy, relaxed_solution_from_values
from src.lp.pipeline import build_primal, relax_primal
from src.models.certificates import RelaxedSolution
from src.models.game import GameTables
from src.solvers.exact_simplex import solve_lp
from src.utils.errors import InfeasibleInput
from tests.helpers import small_games

HALF = Fraction(1, 2)


@pytest.fixture
def one_pair_game():
    return validate_game(GameTables(
        q1_count=1, q2_count=1, a1_count=2, a2_count=2,
        pi={(0, 0): Fraction(1)},
        payoff={(0, 0, a, a): Fraction(1) for a in range(2)},
    ))


def relaxed_objective(game, relaxed: RelaxedSolution) -> Fraction:
    return sum(
        (game.pi_of(q1, q2) * game.payoff_of(q1, q2, a1, a2) * value
         for (q1, q2, a1, a2), value in relaxed.p_tilde.items()),
        Fraction(0),
    )


def test_zero_p_tilde_gives_product(one_pair_game):
    p1 = {(0, 0): Fraction(1, 3), (0, 1): Fraction(2, 3)}
    p2 = {(0, 0): Fraction(1, 4), (0, 1): Fraction(3, 4)}
    strategy = complete_strategy(one_pair_game, RelaxedSolution(p_tilde={}, p1=p1, p2=p2))
    for a1 in range(2):
        for a2 in range(2):
            assert strategy.prob(0, 0, a1, a2) == p1[(0, a1)] * p2[(0, a2)]


def test_feasible_p_tilde_is_a_fixed_point(one_pair_game):
    p_tilde = {(0, 0, 0, 0): HALF, (0, 0, 1, 1): HALF}
    marginal = {(0, 0): HALF, (0, 1): HALF}
    strategy = complete_strategy(one_pair_game, RelaxedSolution(p_tilde=p_tilde, p1=marginal, p2=marginal))
    assert strategy.p == p_tilde


def test_partial_p_tilde_is_completed(one_pair_game):
    marginal = {(0, 0): HALF, (0, 1): HALF}
    relaxed = RelaxedSolution(p_tilde={(0, 0, 0, 0): HALF}, p1=marginal, p2=marginal)
    strategy = complete_strategy(one_pair_game, relaxed)
    assert strategy.p == {(0, 0, 0, 0): HALF, (0, 0, 1, 1): HALF}


def test_marginal_overrun_is_rejected(one_pair_game):
    marginal = {(0, 0): HALF, (0, 1): HALF}
    relaxed = RelaxedSolution(p_tilde={(0, 0, 0, 0): Fraction(3, 4)}, p1=marginal, p2=marginal)
    with pytest.raises(InfeasibleInput):
        complete_strategy(one_pair_game, relaxed)


def test_unnormalized_marginal_is_rejected(one_pair_game):
    relaxed = RelaxedSolution(p_tilde={}, p1={(0, 0): HALF}, p2={(0, 0): Fraction(1)})
    with pytest.raises(InfeasibleInput):
        complete_strategy(one_pair_game, relaxed)


def test_negative_p_tilde_is_rejected(one_pair_game):
    marginal = {(0, 0): HALF, (0, 1): HALF}
    relaxed = RelaxedSolution(p_tilde={(0, 0, 0, 0): Fraction(-1, 4)}, p1=marginal, p2=marginal)
    with pytest.raises(InfeasibleInput):
        complete_strategy(one_pair_game, relaxed)


def test_relaxed_optimum_completes_to_optimal_chsh_strategy(chsh):
    relaxed_lp = relax_primal(build_primal(chsh))
    solution = solve_lp(relaxed_lp)
    strategy = complete_strategy(chsh, relaxed_solution_from_values(chsh, solution.values))
    assert check_no_signaling(strategy).is_no_signaling
    assert acceptance_probability(chsh, strategy) == solution.objective == 1


@given(small_games(), st.lists(st.fractions(min_value=0, max_value=1, max_denominator=7), min_size=1, max_size=8))
def test_downward_perturbation_still_completes(game, factors):
    values = solve_lp(relax_primal(build_primal(game))).values
    optimal = relaxed_solution_from_values(game, values)
    shrunk = {
        key: value * factors[position % len(factors)]
        for position, (key, value) in enumerate(sorted(optimal.p_tilde.items()))
    }
    relaxed = RelaxedSolution(p_tilde=shrunk, p1=optimal.p1, p2=optimal.p2)

    strategy = complete_strategy(game, relaxed)

    assert check_no_signaling(strategy).is_no_signaling
    p1, p2 = strategy_marginals(strategy)
    assert p1 == {key: optimal.p1.get(key, 0) for key in p1}
    assert p2 == {key: optimal.p2.get(key, 0) for key in p2}
    for key, value in relaxed.p_tilde.items():
        assert strategy.prob(*key) >= value
    assert acceptance_probability(game, strategy) >= relaxed_objective(game, relaxed)
