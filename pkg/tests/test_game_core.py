from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.games.builtin import chsh_game, pr_box_strategy, random_game
from src.games.game_core import (
    acceptance_probability,
    check_no_signaling,
    deterministic_strategy,
    game_size,
    lift_strategy,
    marginals,
    product_strategy,
    restrict_strategy,
    strategy_marginals,
    validate_game,
)
from src.models.game import GameTables, Strategy
from src.utils.errors import (
    DimensionMismatch,
    EmptyGame,
    NonNormalizedDistribution,
    PayoffOutOfRange,
    SignalingStrategy,
    StrategyNotNormalized,
)
from tests.helpers import small_games

Q = Fraction(1, 4)


def chsh_tables(**overrides) -> GameTables:
    base = chsh_game()
    fields = dict(q1_count=2, q2_count=2, a1_count=2, a2_count=2, pi=dict(base.pi), payoff=dict(base.payoff))
    fields.update(overrides)
    return GameTables(**fields)


def uniform(game) -> Strategy:
    n1, n2, m1, m2 = game.dimensions
    return Strategy(
        q1_count=n1, q2_count=n2, a1_count=m1, a2_count=m2,
        p={key: Fraction(1, m1 * m2) for key in game.answer_indices()},
    )


class TestValidateGame:
    def test_trivial_game_unchanged(self, g_triv):
        assert g_triv.dimensions == (1, 1, 1, 1)
        assert not g_triv.was_pruned

    def test_chsh_is_not_pruned(self):
        game = validate_game(chsh_tables())
        assert game.dimensions == (2, 2, 2, 2)
        assert game.pi == {(q1, q2): Q for q1 in range(2) for q2 in range(2)}

    def test_zero_marginal_question_is_pruned(self):
        game = validate_game(chsh_tables(q1_count=3))
        assert game.q1_count == 2
        assert game.was_pruned
        assert game.q1_labels == (0, 1)
        assert game.original_q1_count == 3

    def test_pruning_remaps_middle_question(self):
        tables = GameTables(
            q1_count=3, q2_count=1, a1_count=1, a2_count=1,
            pi={(0, 0): Fraction(1, 2), (2, 0): Fraction(1, 2)},
            payoff={(2, 0, 0, 0): Fraction(1)},
        )
        game = validate_game(tables)
        assert game.q1_labels == (0, 2)
        assert game.payoff == {(1, 0, 0, 0): Fraction(1)}

    def test_distribution_must_sum_to_one(self):
        with pytest.raises(NonNormalizedDistribution):
            validate_game(chsh_tables(pi={(0, 0): Fraction(1, 2)}))

    def test_negative_probability(self):
        pi = {(0, 0): Fraction(3, 2), (1, 1): Fraction(-1, 2)}
        with pytest.raises(NonNormalizedDistribution):
            validate_game(chsh_tables(pi=pi))

    def test_payoff_out_of_range(self):
        with pytest.raises(PayoffOutOfRange):
            validate_game(chsh_tables(payoff={(0, 0, 0, 0): Fraction(3, 2)}))

    def test_index_outside_dimensions(self):
        with pytest.raises(DimensionMismatch):
            validate_game(chsh_tables(payoff={(0, 0, 2, 0): Fraction(1)}))

    def test_empty_answer_set(self):
        with pytest.raises(EmptyGame):
            validate_game(chsh_tables(a2_count=0, payoff={}))


def test_marginals(chsh, g_triv):
    assert marginals(chsh) == ({0: Fraction(1, 2), 1: Fraction(1, 2)}, {0: Fraction(1, 2), 1: Fraction(1, 2)})
    assert marginals(g_triv) == ({0: Fraction(1)}, {0: Fraction(1)})


def test_game_size(chsh, g_triv):
    assert game_size(g_triv) == 1
    assert game_size(chsh) == 16
    assert game_size(random_game(np.random.default_rng(0), 3, 2, 4, 5)) == 120


class TestAcceptance:
    def test_trivial(self, g_triv):
        strategy = Strategy(q1_count=1, q2_count=1, a1_count=1, a2_count=1, p={(0, 0, 0, 0): 1})
        assert acceptance_probability(g_triv, strategy) == 1

    def test_chsh_uniform_strategy(self, chsh):
        assert acceptance_probability(chsh, uniform(chsh)) == Fraction(1, 2)

    def test_chsh_pr_box(self, chsh):
        assert acceptance_probability(chsh, pr_box_strategy()) == 1

    def test_dimension_mismatch(self, chsh, g_triv):
        with pytest.raises(DimensionMismatch):
            acceptance_probability(g_triv, uniform(chsh))


class TestNoSignaling:
    def test_product_strategy(self):
        half = [Fraction(1, 2), Fraction(1, 2)]
        strategy = product_strategy([half, [Fraction(1, 3), Fraction(2, 3)]], [half, half])
        report = check_no_signaling(strategy)
        assert report.is_no_signaling
        assert report.worst_violation == 0

    def test_answer_copies_other_question(self):
        strategy = Strategy(
            q1_count=1, q2_count=2, a1_count=2, a2_count=1,
            p={(0, q2, q2, 0): Fraction(1) for q2 in range(2)},
        )
        report = check_no_signaling(strategy)
        assert not report.is_no_signaling
        assert report.worst_violation == 1
        assert report.witness[0] == 1

    def test_pr_box(self):
        report = check_no_signaling(pr_box_strategy())
        assert report.is_no_signaling
        assert report.worst_violation == 0

    def test_tolerance_admits_small_violations(self):
        strategy = Strategy(
            q1_count=1, q2_count=2, a1_count=2, a2_count=1,
            p={(0, 0, 0, 0): Fraction(1, 2), (0, 0, 1, 0): Fraction(1, 2),
               (0, 1, 0, 0): Fraction(51, 100), (0, 1, 1, 0): Fraction(49, 100)},
        )
        assert not check_no_signaling(strategy).is_no_signaling
        assert check_no_signaling(strategy, "1/50").is_no_signaling

    def test_marginals_of_pr_box(self):
        p1, p2 = strategy_marginals(pr_box_strategy())
        assert set(p1.values()) == {Fraction(1, 2)}
        assert set(p2.values()) == {Fraction(1, 2)}

    def test_marginals_of_signaling_strategy(self):
        # each answer copies the other side's question
        strategy = Strategy(
            q1_count=2, q2_count=2, a1_count=2, a2_count=2,
            p={(q1, q2, q2, q1): Fraction(1) for q1 in range(2) for q2 in range(2)},
        )
        with pytest.raises(SignalingStrategy, match="signals"):
            strategy_marginals(strategy)


def test_strategy_must_be_normalized():
    with pytest.raises(StrategyNotNormalized):
        Strategy(q1_count=1, q2_count=1, a1_count=2, a2_count=1, p={(0, 0, 0, 0): Fraction(1, 2)})


def test_deterministic_strategy_on_chsh(chsh):
    # a1 = a2 = 0 wins every question pair but (1, 1)
    assert acceptance_probability(chsh, deterministic_strategy([0, 0], [0, 0], 2, 2)) == Fraction(3, 4)


def test_lift_and_restrict_pruned_game():
    game = validate_game(chsh_tables(q1_count=3, q2_count=3))
    lifted = lift_strategy(game, pr_box_strategy())
    assert lifted.dimensions == (3, 3, 2, 2)
    assert check_no_signaling(lifted).is_no_signaling
    restored = restrict_strategy(game, lifted)
    assert restored == pr_box_strategy()
    assert acceptance_probability(game, restored) == 1


@given(small_games())
def test_product_of_uniform_marginals_is_no_signaling(game):
    n1, n2, m1, m2 = game.dimensions
    strategy = product_strategy([[Fraction(1, m1)] * m1] * n1, [[Fraction(1, m2)] * m2] * n2)
    assert check_no_signaling(strategy).is_no_signaling
    assert 0 <= acceptance_probability(game, strategy) <= 1


@st.composite
def games_with_strategies(draw, count: int = 1):
    """A small game plus `count` arbitrary normalized strategies of matching dimensions"""
    game = draw(small_games())
    n1, n2, m1, m2 = game.dimensions
    strategies = []
    for _ in range(count):
        table = {}
        for q1 in range(n1):
            for q2 in range(n2):
                weights = draw(st.lists(st.integers(0, 5), min_size=m1 * m2, max_size=m1 * m2).filter(any))
                total = sum(weights)
                for k, weight in enumerate(weights):
                    if weight:
                        table[(q1, q2, k // m2, k % m2)] = Fraction(weight, total)
        strategies.append(Strategy(q1_count=n1, q2_count=n2, a1_count=m1, a2_count=m2, p=table))
    return game, strategies


@given(games_with_strategies())
def test_acceptance_is_a_probability(case):
    game, (strategy,) = case
    assert 0 <= acceptance_probability(game, strategy) <= 1


@given(games_with_strategies(count=2), st.fractions(min_value=0, max_value=1, max_denominator=12))
def test_acceptance_is_linear_in_the_strategy(case, weight):
    game, (first, second) = case
    n1, n2, m1, m2 = game.dimensions
    mixed = Strategy(
        q1_count=n1, q2_count=n2, a1_count=m1, a2_count=m2,
        p={
            key: weight * first.p.get(key, 0) + (1 - weight) * second.p.get(key, 0)
            for key in set(first.p) | set(second.p)
        },
    )
    expected = weight * acceptance_probability(game, first) + (1 - weight) * acceptance_probability(game, second)
    assert acceptance_probability(game, mixed) == expected


@given(games_with_strategies(), st.randoms(use_true_random=False))
def test_relabeling_preserves_acceptance_and_size(case, rnd):
    game, (strategy,) = case
    n1, n2, m1, m2 = game.dimensions
    s1, s2, b1, b2 = (rnd.sample(range(k), k) for k in (n1, n2, m1, m2))

    def relabel(key):
        q1, q2, a1, a2 = key
        return s1[q1], s2[q2], b1[a1], b2[a2]

    relabeled_game = validate_game(GameTables(
        q1_count=n1, q2_count=n2, a1_count=m1, a2_count=m2,
        pi={(s1[q1], s2[q2]): value for (q1, q2), value in game.pi.items()},
        payoff={relabel(key): value for key, value in game.payoff.items()},
    ))
    relabeled_strategy = Strategy(
        q1_count=n1, q2_count=n2, a1_count=m1, a2_count=m2,
        p={relabel(key): value for key, value in strategy.p.items()},
    )
    assert game_size(relabeled_game) == game_size(game)
    assert acceptance_probability(relabeled_game, relabeled_strategy) == acceptance_probability(game, strategy)
