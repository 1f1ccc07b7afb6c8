"""
Game validation, acceptance probability and no-signaling checks
"""
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import structlog

from src.models.game import Game, GameTables, SignalingReport, Strategy
from src.utils.errors import (
    DimensionMismatch,
    EmptyGame,
    NonNormalizedDistribution,
    PayoffOutOfRange,
    SignalingStrategy,
)
from src.utils.rationals import ONE, ZERO, exact_sum, to_fraction

logger = structlog.get_logger()


def validate_game(raw: Union[GameTables, Game, Mapping]) -> Game:
    """
    Check a raw game and prune every question asked with probability zero.

    The returned game records, in q1_labels / q2_labels, the original index of
    each retained question so strategies can be lifted back.
    """
    if isinstance(raw, Game):
        return raw
    tables = raw if isinstance(raw, GameTables) else GameTables.model_validate(raw)

    dims = (tables.q1_count, tables.q2_count, tables.a1_count, tables.a2_count)
    if min(dims) == 0:
        raise EmptyGame(f"game has an empty question or answer set: {dims}")

    for (q1, q2), prob in tables.pi.items():
        if not (0 <= q1 < tables.q1_count and 0 <= q2 < tables.q2_count):
            raise DimensionMismatch(f"pi index {(q1, q2)} outside {dims[:2]}")
        if prob < 0:
            raise NonNormalizedDistribution(f"pi{(q1, q2)} = {prob} is negative")
    total = exact_sum(tables.pi.values())
    if total != ONE:
        raise NonNormalizedDistribution(f"question distribution sums to {total}, not 1")

    for key, value in tables.payoff.items():
        if not all(0 <= k < bound for k, bound in zip(key, dims)):
            raise DimensionMismatch(f"payoff index {key} outside {dims}")
        if not ZERO <= value <= ONE:
            raise PayoffOutOfRange(f"R{key} = {value} is outside [0, 1]")

    pi1 = [ZERO] * tables.q1_count
    pi2 = [ZERO] * tables.q2_count
    for (q1, q2), prob in tables.pi.items():
        pi1[q1] += prob
        pi2[q2] += prob
    kept1 = [q for q, mass in enumerate(pi1) if mass > 0]
    kept2 = [q for q, mass in enumerate(pi2) if mass > 0]
    if not kept1 or not kept2:
        raise EmptyGame("every question was pruned")

    remap1 = {old: new for new, old in enumerate(kept1)}
    remap2 = {old: new for new, old in enumerate(kept2)}
    pi = {
        (remap1[q1], remap2[q2]): prob
        for (q1, q2), prob in tables.pi.items()
        if prob != 0
    }
    payoff = {
        (remap1[q1], remap2[q2], a1, a2): value
        for (q1, q2, a1, a2), value in tables.payoff.items()
        if q1 in remap1 and q2 in remap2 and value != 0
    }

    if len(kept1) < tables.q1_count or len(kept2) < tables.q2_count:
        logger.info(
            "Pruned zero-marginal questions",
            pruned_q1=[q for q in range(tables.q1_count) if q not in remap1],
            pruned_q2=[q for q in range(tables.q2_count) if q not in remap2],
        )

    return Game(
        q1_count=len(kept1),
        q2_count=len(kept2),
        a1_count=tables.a1_count,
        a2_count=tables.a2_count,
        pi=pi,
        payoff=payoff,
        q1_labels=tuple(kept1),
        q2_labels=tuple(kept2),
        original_q1_count=tables.q1_count,
        original_q2_count=tables.q2_count,
    )


def marginals(game: Game) -> Tuple[Dict[int, Fraction], Dict[int, Fraction]]:
    """Question marginals pi1(q1) and pi2(q2)"""
    pi1, pi2 = game.question_marginals()
    return dict(enumerate(pi1)), dict(enumerate(pi2))


def game_size(game: Game) -> int:
    """|G| = |Q1| |Q2| |A1| |A2|"""
    return game.size


def acceptance_probability(game: Game, strategy: Strategy) -> Fraction:
    """Exact acceptance probability of a strategy, summed in row-major order"""
    if strategy.dimensions != game.dimensions:
        raise DimensionMismatch(f"strategy dimensions {strategy.dimensions} differ from game {game.dimensions}")
    total = ZERO
    for (q1, q2), prob in sorted(game.pi.items()):
        inner = ZERO
        for a1 in range(game.a1_count):
            for a2 in range(game.a2_count):
                payoff = game.payoff_of(q1, q2, a1, a2)
                if payoff:
                    inner += payoff * strategy.prob(q1, q2, a1, a2)
        total += prob * inner
    return total


def _answer_marginals(strategy: Strategy) -> Tuple[Dict, Dict]:
    """m1[q1,q2,a1] = sum_a2 p and m2[q1,q2,a2] = sum_a1 p"""
    m1: Dict[Tuple[int, int, int], Fraction] = {}
    m2: Dict[Tuple[int, int, int], Fraction] = {}
    for (q1, q2, a1, a2), prob in strategy.p.items():
        m1[(q1, q2, a1)] = m1.get((q1, q2, a1), ZERO) + prob
        m2[(q1, q2, a2)] = m2.get((q1, q2, a2), ZERO) + prob
    return m1, m2


def check_no_signaling(strategy: Strategy, tolerance: Union[Fraction, int, str, float] = 0) -> SignalingReport:
    """
    Largest gap between a prover's answer marginal under two different
    questions of the other prover, over both directions.
    """
    tolerance = to_fraction(tolerance)
    if tolerance < 0:
        raise ValueError("tolerance must be nonnegative")
    n1, n2, m1_count, m2_count = strategy.dimensions
    m1, m2 = _answer_marginals(strategy)

    worst = ZERO
    witness: Optional[Tuple[int, int, int, int, int]] = None

    # direction 1: p1(a1|q1) must not depend on q2
    for q1 in range(n1):
        for a1 in range(m1_count):
            column = [(m1.get((q1, q2, a1), ZERO), q2) for q2 in range(n2)]
            high, q_high = max(column)
            low, q_low = min(column)
            if high - low > worst:
                worst = high - low
                witness = (1, q1, a1, q_high, q_low)

    # direction 2: p2(a2|q2) must not depend on q1
    for q2 in range(n2):
        for a2 in range(m2_count):
            column = [(m2.get((q1, q2, a2), ZERO), q1) for q1 in range(n1)]
            high, q_high = max(column)
            low, q_low = min(column)
            if high - low > worst:
                worst = high - low
                witness = (2, q2, a2, q_high, q_low)

    return SignalingReport(
        is_no_signaling=worst <= tolerance,
        worst_violation=worst,
        tolerance=tolerance,
        witness=witness,
    )


def strategy_marginals(strategy: Strategy) -> Tuple[Dict[Tuple[int, int], Fraction], Dict[Tuple[int, int], Fraction]]:
    """p1(a1|q1) and p2(a2|q2) of a no-signaling strategy, keyed (q1,a1) / (q2,a2)"""
    report = check_no_signaling(strategy)
    if not report.is_no_signaling:
        raise SignalingStrategy(f"strategy signals (witness {report.witness}); marginals are not well defined")
    m1, m2 = _answer_marginals(strategy)
    p1 = {(q1, a1): m1.get((q1, 0, a1), ZERO) for q1 in range(strategy.q1_count) for a1 in range(strategy.a1_count)}
    p2 = {(q2, a2): m2.get((0, q2, a2), ZERO) for q2 in range(strategy.q2_count) for a2 in range(strategy.a2_count)}
    return p1, p2


def product_strategy(
    p1: Sequence[Sequence[Fraction]],
    p2: Sequence[Sequence[Fraction]],
) -> Strategy:
    """Local strategy p(a1,a2|q1,q2) = p1[q1][a1] * p2[q2][a2]"""
    n1, n2 = len(p1), len(p2)
    m1, m2 = len(p1[0]), len(p2[0])
    table = {}
    for q1 in range(n1):
        for q2 in range(n2):
            for a1 in range(m1):
                for a2 in range(m2):
                    prob = to_fraction(p1[q1][a1]) * to_fraction(p2[q2][a2])
                    if prob:
                        table[(q1, q2, a1, a2)] = prob
    return Strategy(q1_count=n1, q2_count=n2, a1_count=m1, a2_count=m2, p=table)


def deterministic_strategy(f1: Sequence[int], f2: Sequence[int], a1_count: int, a2_count: int) -> Strategy:
    """Prover 1 answers f1[q1], prover 2 answers f2[q2]"""
    table = {
        (q1, q2, f1[q1], f2[q2]): ONE
        for q1 in range(len(f1))
        for q2 in range(len(f2))
    }
    return Strategy(q1_count=len(f1), q2_count=len(f2), a1_count=a1_count, a2_count=a2_count, p=table)


def lift_strategy(game: Game, strategy: Strategy) -> Strategy:
    """
    Re-express a strategy of a pruned game on the original question sets.
    Pruned questions answer 0 and are coupled as a product with the other
    prover's marginal, which keeps the lifted strategy no-signaling.
    """
    if strategy.dimensions != game.dimensions:
        raise DimensionMismatch("strategy does not belong to this game")
    if not game.was_pruned:
        return strategy

    n1 = game.original_q1_count or game.q1_count
    n2 = game.original_q2_count or game.q2_count
    labels1 = game.q1_labels or tuple(range(game.q1_count))
    labels2 = game.q2_labels or tuple(range(game.q2_count))
    back1 = {old: new for new, old in enumerate(labels1)}
    back2 = {old: new for new, old in enumerate(labels2)}

    # reference marginals; any fixed partner question works for a no-signaling strategy
    m1, m2 = _answer_marginals(strategy)

    table: Dict[Tuple[int, int, int, int], Fraction] = {}
    for q1 in range(n1):
        for q2 in range(n2):
            if q1 in back1 and q2 in back2:
                for a1 in range(game.a1_count):
                    for a2 in range(game.a2_count):
                        prob = strategy.prob(back1[q1], back2[q2], a1, a2)
                        if prob:
                            table[(q1, q2, a1, a2)] = prob
            elif q1 in back1:
                for a1 in range(game.a1_count):
                    prob = m1.get((back1[q1], 0, a1), ZERO)
                    if prob:
                        table[(q1, q2, a1, 0)] = prob
            elif q2 in back2:
                for a2 in range(game.a2_count):
                    prob = m2.get((0, back2[q2], a2), ZERO)
                    if prob:
                        table[(q1, q2, 0, a2)] = prob
            else:
                table[(q1, q2, 0, 0)] = ONE

    return Strategy(q1_count=n1, q2_count=n2, a1_count=game.a1_count, a2_count=game.a2_count, p=table)


def restrict_strategy(game: Game, strategy: Strategy) -> Strategy:
    """Drop the questions pruned from game; strategy is over the original question sets"""
    if not game.was_pruned:
        return strategy
    labels1 = game.q1_labels or tuple(range(game.q1_count))
    labels2 = game.q2_labels or tuple(range(game.q2_count))
    expected = (
        game.original_q1_count or game.q1_count,
        game.original_q2_count or game.q2_count,
        game.a1_count,
        game.a2_count,
    )
    if strategy.dimensions != expected:
        raise DimensionMismatch(f"strategy dimensions {strategy.dimensions} differ from game file {expected}")
    table = {
        (new1, new2, a1, a2): strategy.prob(old1, old2, a1, a2)
        for new1, old1 in enumerate(labels1)
        for new2, old2 in enumerate(labels2)
        for a1 in range(game.a1_count)
        for a2 in range(game.a2_count)
    }
    return Strategy(
        q1_count=game.q1_count, q2_count=game.q2_count, a1_count=game.a1_count, a2_count=game.a2_count, p=table
    )
