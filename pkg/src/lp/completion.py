"""
Completing a solution of the relaxed program into a no-signaling strategy
"""
from fractions import Fraction
from typing import Dict, Mapping

import structlog

from src.models.certificates import RelaxedSolution
from src.models.game import Game, Strategy
from src.models.linear_program import indexed_name
from src.utils.errors import InfeasibleInput
from src.utils.rationals import ONE, ZERO, exact_sum

logger = structlog.get_logger()


def relaxed_solution_from_values(game: Game, values: Mapping[str, Fraction]) -> RelaxedSolution:
    """Read (p~, p1, p2) from variable values of the primal or relaxed program"""
    n1, n2, m1, m2 = game.dimensions
    p_tilde = {}
    for key in game.answer_indices():
        value = values.get(indexed_name("p", key), ZERO)
        if value:
            p_tilde[key] = value
    p1 = {(q1, a1): values.get(indexed_name("p1", (q1, a1)), ZERO) for q1 in range(n1) for a1 in range(m1)}
    p2 = {(q2, a2): values.get(indexed_name("p2", (q2, a2)), ZERO) for q2 in range(n2) for a2 in range(m2)}
    return RelaxedSolution(p_tilde=p_tilde, p1=p1, p2=p2)


def complete_strategy(game: Game, relaxed: RelaxedSolution) -> Strategy:
    """
    For every question pair let
        s(a1) = p1(a1|q1) - sum_a2 p~(a1,a2|q1,q2)
        t(a2) = p2(a2|q2) - sum_a1 p~(a1,a2|q1,q2)
        F = sum s = sum t
    and set p = p~ + s t / F when F > 0, p = p~ otherwise. The result meets
    every marginal equality exactly and dominates p~ pointwise.
    """
    n1, n2, m1, m2 = game.dimensions

    def p1(q1: int, a1: int) -> Fraction:
        return relaxed.p1.get((q1, a1), ZERO)

    def p2(q2: int, a2: int) -> Fraction:
        return relaxed.p2.get((q2, a2), ZERO)

    def p_tilde(q1: int, q2: int, a1: int, a2: int) -> Fraction:
        return relaxed.p_tilde.get((q1, q2, a1, a2), ZERO)

    for key, value in relaxed.p_tilde.items():
        if value < 0:
            raise InfeasibleInput(f"p~{key} = {value} is negative")
    for q1 in range(n1):
        if exact_sum(p1(q1, a1) for a1 in range(m1)) != ONE:
            raise InfeasibleInput(f"p1(.|{q1}) does not sum to 1")
    for q2 in range(n2):
        if exact_sum(p2(q2, a2) for a2 in range(m2)) != ONE:
            raise InfeasibleInput(f"p2(.|{q2}) does not sum to 1")

    table: Dict[tuple, Fraction] = {}
    completed_pairs = 0
    for q1, q2 in game.question_pairs():
        s = [p1(q1, a1) - exact_sum(p_tilde(q1, q2, a1, a2) for a2 in range(m2)) for a1 in range(m1)]
        t = [p2(q2, a2) - exact_sum(p_tilde(q1, q2, a1, a2) for a1 in range(m1)) for a2 in range(m2)]
        if any(v < 0 for v in s) or any(v < 0 for v in t):
            raise InfeasibleInput(f"relaxed marginal inequality violated at question pair {(q1, q2)}")
        mass = exact_sum(s)
        if mass != exact_sum(t):
            raise InfeasibleInput(f"slack totals differ at question pair {(q1, q2)}")
        if mass:
            completed_pairs += 1
        for a1 in range(m1):
            for a2 in range(m2):
                prob = p_tilde(q1, q2, a1, a2)
                if mass:
                    prob += s[a1] * t[a2] / mass
                if prob:
                    table[(q1, q2, a1, a2)] = prob

    logger.debug("Completed relaxed solution", question_pairs=n1 * n2, completed_pairs=completed_pairs)
    return Strategy(q1_count=n1, q2_count=n2, a1_count=m1, a2_count=m2, p=table)
