"""
Compile an explicit verifier description into the game it induces
"""
from collections import Counter
from fractions import Fraction
from typing import Optional

import structlog

from src.games.game_core import validate_game
from src.models.game import Game, GameTables
from src.models.verifier import VerifierSpec
from src.utils.errors import EnumerationTooLarge, IncompleteSpec

logger = structlog.get_logger()

DEFAULT_MAX_RANDOMNESS_BITS = 24


def compile_game(spec: VerifierSpec, max_randomness_bits: Optional[int] = None) -> Game:
    """
    pi(q1,q2) = #{r : M(r) = (q1,q2)} / 2^l and
    R(a1,a2|q1,q2) = #{r : M(r) = (q1,q2), (r,a1,a2) accepted} / #{r : M(r) = (q1,q2)}.
    Counting is done with integers; division happens once at the end.
    """
    guard = DEFAULT_MAX_RANDOMNESS_BITS if max_randomness_bits is None else max_randomness_bits
    if spec.randomness_bits > guard:
        raise EnumerationTooLarge(f"2^{spec.randomness_bits} random strings exceed the 2^{guard} guard")

    randomness = spec.randomness
    missing = [r for r in range(randomness) if r not in spec.question_map]
    if missing:
        raise IncompleteSpec(f"question map misses {len(missing)} random strings, first r={missing[0]}")

    pair_counts: Counter = Counter()
    for r in range(randomness):
        pair_counts[spec.question_map[r]] += 1

    accept_counts: Counter = Counter()
    for r, a1, a2 in spec.accepting:
        q1, q2 = spec.question_map[r]
        accept_counts[(q1, q2, a1, a2)] += 1

    n1, n2 = spec.resolved_question_counts()
    tables = GameTables(
        q1_count=n1,
        q2_count=n2,
        a1_count=spec.a1_count,
        a2_count=spec.a2_count,
        pi={pair: Fraction(count, randomness) for pair, count in pair_counts.items()},
        payoff={
            key: Fraction(count, pair_counts[key[:2]])
            for key, count in accept_counts.items()
        },
    )
    game = validate_game(tables)
    logger.info(
        "Compiled verifier",
        verifier=spec.name,
        randomness_bits=spec.randomness_bits,
        question_pairs=len(pair_counts),
        game_size=game.size,
    )
    return game
