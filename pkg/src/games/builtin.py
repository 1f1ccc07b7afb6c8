"""
Named games, verifiers and strategies, plus a seeded random game generator
"""
from fractions import Fraction
from typing import Optional

import numpy as np

from src.models.game import Game, GameTables, Strategy
from src.models.verifier import VerifierSpec
from src.games.game_core import validate_game

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def trivial_game() -> Game:
    """G_triv: one question and one answer each, always accepted"""
    return validate_game(GameTables(
        q1_count=1, q2_count=1, a1_count=1, a2_count=1,
        pi={(0, 0): Fraction(1)},
        payoff={(0, 0, 0, 0): Fraction(1)},
    ))


def chsh_game() -> Game:
    """Uniform binary questions, accept iff a1 xor a2 = q1 and q2"""
    payoff = {
        (q1, q2, a1, a2): Fraction(1)
        for q1 in range(2) for q2 in range(2)
        for a1 in range(2) for a2 in range(2)
        if a1 ^ a2 == q1 & q2
    }
    pi = {(q1, q2): QUARTER for q1 in range(2) for q2 in range(2)}
    return validate_game(GameTables(q1_count=2, q2_count=2, a1_count=2, a2_count=2, pi=pi, payoff=payoff))


def guess_game() -> Game:
    """G_guess: uniform binary questions, accept iff a1 = q2 and a2 = q1"""
    payoff = {(q1, q2, q2, q1): Fraction(1) for q1 in range(2) for q2 in range(2)}
    pi = {(q1, q2): QUARTER for q1 in range(2) for q2 in range(2)}
    return validate_game(GameTables(q1_count=2, q2_count=2, a1_count=2, a2_count=2, pi=pi, payoff=payoff))


def zero_game(questions: int = 2, answers: int = 2) -> Game:
    """Uniform questions and a payoff that never accepts"""
    prob = Fraction(1, questions * questions)
    pi = {(q1, q2): prob for q1 in range(questions) for q2 in range(questions)}
    return validate_game(GameTables(
        q1_count=questions, q2_count=questions, a1_count=answers, a2_count=answers, pi=pi, payoff={},
    ))


def pr_box_strategy() -> Strategy:
    """p(a1,a2|q1,q2) = 1/2 iff a1 xor a2 = q1 and q2"""
    table = {
        (q1, q2, a1, a2): HALF
        for q1 in range(2) for q2 in range(2)
        for a1 in range(2) for a2 in range(2)
        if a1 ^ a2 == q1 & q2
    }
    return Strategy(q1_count=2, q2_count=2, a1_count=2, a2_count=2, p=table)


def chsh_verifier() -> VerifierSpec:
    """l = 2, r = r1 r2 asks (r1, r2), accepts a1 xor a2 = r1 and r2"""
    question_map = {r: (r >> 1, r & 1) for r in range(4)}
    accepting = frozenset(
        (r, a1, a2)
        for r, (q1, q2) in question_map.items()
        for a1 in range(2) for a2 in range(2)
        if a1 ^ a2 == q1 & q2
    )
    return VerifierSpec(
        name="chsh", randomness_bits=2, question_map=question_map,
        accepting=accepting, a1_count=2, a2_count=2,
    )


def equality_verifier() -> VerifierSpec:
    """l = 1, both provers get r, accept iff a1 = a2"""
    question_map = {r: (r, r) for r in range(2)}
    accepting = frozenset((r, a, a) for r in range(2) for a in range(2))
    return VerifierSpec(
        name="equality", randomness_bits=1, question_map=question_map,
        accepting=accepting, a1_count=2, a2_count=2,
    )


def guess_verifier() -> VerifierSpec:
    """l = 2, r = r1 r2 asks (r1, r2), accepts a1 = r2 and a2 = r1"""
    question_map = {r: (r >> 1, r & 1) for r in range(4)}
    accepting = frozenset((r, q2, q1) for r, (q1, q2) in question_map.items())
    return VerifierSpec(
        name="guess", randomness_bits=2, question_map=question_map,
        accepting=accepting, a1_count=2, a2_count=2,
    )


BUILTIN_VERIFIERS = {
    "chsh": chsh_verifier,
    "equality": equality_verifier,
    "guess": guess_verifier,
}


def random_game(
    rng: np.random.Generator,
    q1_count: int,
    q2_count: int,
    a1_count: int,
    a2_count: int,
    payoff_denominator: int = 4,
    sparsity: Optional[float] = None,
) -> Game:
    """
    Random game with a full-support rational question distribution and payoffs
    k / payoff_denominator. With sparsity set, that fraction of payoffs is 0.
    """
    weights = rng.integers(1, 10, size=(q1_count, q2_count))
    total = int(weights.sum())
    pi = {
        (q1, q2): Fraction(int(weights[q1, q2]), total)
        for q1 in range(q1_count) for q2 in range(q2_count)
    }
    levels = rng.integers(0, payoff_denominator + 1, size=(q1_count, q2_count, a1_count, a2_count))
    if sparsity is not None:
        levels = np.where(rng.random(levels.shape) < sparsity, 0, levels)
    payoff = {
        (q1, q2, a1, a2): Fraction(int(levels[q1, q2, a1, a2]), payoff_denominator)
        for q1 in range(q1_count) for q2 in range(q2_count)
        for a1 in range(a1_count) for a2 in range(a2_count)
        if levels[q1, q2, a1, a2]
    }
    return validate_game(GameTables(
        q1_count=q1_count, q2_count=q2_count, a1_count=a1_count, a2_count=a2_count,
        pi=pi, payoff=payoff,
    ))
