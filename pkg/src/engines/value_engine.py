"""
Value engine: promise decisions, approximation and exact baselines for the
no-signaling value of a game
"""
import itertools
import math
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Tuple, Union

from joblib import Parallel, delayed

from src.engines.base_engine import BaseEngine
from src.games.game_core import deterministic_strategy
from src.games.verifier_compiler import compile_game
from src.lp.completion import complete_strategy, relaxed_solution_from_values
from src.lp.mpc_reduction import build_mpc_instance, repair_approx_solution
from src.lp.pipeline import build_primal
from src.models.game import Game, Strategy
from src.models.linear_program import LPStatus
from src.models.mpc import OutcomeKind
from src.models.verdict import Decision, EstimateMethod, ProofSystemCheck, ValueEstimate, Verdict
from src.models.verifier import VerifierSpec
from src.solvers.exact_simplex import ExactSimplexSolver
from src.solvers.mpc_solver import MixedPackingCoveringSolver, check_epsilon
from src.utils.config import NSValueConfig
from src.utils.errors import EnumerationTooLarge, InvalidThresholds, SolverError
from src.utils.rationals import ONE, ZERO, to_fraction

Number = Union[Fraction, int, float, str]

EXTRA_SEARCH_STEPS = 8


class ValueEngine(BaseEngine):
    """Decides and approximates w_ns; exact and classical values serve as oracles"""

    def __init__(self, config: Optional[NSValueConfig] = None):
        super().__init__(config, name="value-engine")
        self.exact_solver = ExactSimplexSolver(
            max_variables=self.config.exact.max_variables,
            max_pivots=self.config.exact.max_pivots,
        )
        self.solver = MixedPackingCoveringSolver(self.config, exact_solver=self.exact_solver)

    def decide(self, game: Game, s: Number, c: Number) -> Verdict:
        """
        AT_MOST_S when the packing/covering instance at threshold s has a
        (1+eps)-approximate solution for eps = (c - s) / 4, AT_LEAST_C when
        it is infeasible. AT_MOST_S carries the repaired certificate.
        """
        s, c = to_fraction(s), to_fraction(c)
        if not ZERO <= s < c <= ONE:
            raise InvalidThresholds(f"need 0 <= s < c <= 1, got s = {s}, c = {c}")
        epsilon = (c - s) / 4

        instance = build_mpc_instance(game, s)
        outcome = self.solver.solve(instance, epsilon)
        if outcome.kind is OutcomeKind.APPROX:
            certificate, objective = repair_approx_solution(game, outcome.x, epsilon, s)
            verdict = Verdict(
                decision=Decision.AT_MOST_S, s=s, c=c, epsilon_used=epsilon,
                certificate=certificate, rounds=outcome.rounds,
            )
        else:
            verdict = Verdict(decision=Decision.AT_LEAST_C, s=s, c=c, epsilon_used=epsilon, rounds=outcome.rounds)

        self.logger.info(
            "Decided threshold pair",
            s=str(s), c=str(c), decision=verdict.decision.value, rounds=outcome.rounds,
            certificate_objective=str(verdict.certificate.objective) if verdict.certificate else None,
        )
        return verdict

    def approximate_value(
        self,
        game: Game,
        epsilon: Number,
        method: Optional[Union[EstimateMethod, str]] = None,
    ) -> ValueEstimate:
        """
        Interval [lower, upper] of width at most epsilon. Both ends are
        certified: each AT_LEAST_C answer proves w_ns > s and each repaired
        certificate proves w_ns <= its objective.
        """
        epsilon = check_epsilon(epsilon)
        method = EstimateMethod(method or self.config.engine.approximation_method)
        self.log_processing_start("approximate_value", {"epsilon": str(epsilon), "method": method.value})
        if method is EstimateMethod.GRID:
            estimate = self._grid_search(game, epsilon)
        else:
            estimate = self._binary_search(game, epsilon)
        self.log_processing_complete("approximate_value", {
            "lower": str(estimate.lower), "upper": str(estimate.upper),
            "decisions": estimate.decisions, "rounds": estimate.rounds,
        })
        return estimate

    def _binary_search(self, game: Game, epsilon: Fraction) -> ValueEstimate:
        lower, upper = ZERO, ONE
        depth = math.ceil(math.log2(1 / epsilon)) + 1
        decisions = rounds = 0
        while upper - lower > epsilon:
            if decisions >= depth + EXTRA_SEARCH_STEPS:
                raise SolverError(f"binary search did not close to {epsilon} after {decisions} decisions")
            mid = (lower + upper) / 2
            s = max(ZERO, mid - epsilon / 4)
            c = min(ONE, mid + epsilon / 4)
            verdict = self.decide(game, s, c)
            decisions += 1
            rounds += verdict.rounds
            if verdict.decision is Decision.AT_LEAST_C:
                lower = max(lower, s)
            else:
                upper = min(upper, verdict.certificate.objective)
        return ValueEstimate(
            lower=lower, upper=upper, epsilon=epsilon, method=EstimateMethod.BINARY_SEARCH,
            decisions=decisions, rounds=rounds,
        )

    def _grid_search(self, game: Game, epsilon: Fraction) -> ValueEstimate:
        step = epsilon / 4
        count = math.ceil(ONE / step)
        pairs = [(k * step, min(ONE, (k + 1) * step)) for k in range(count)]
        # results come back in submission order
        verdicts: List[Verdict] = Parallel(n_jobs=self.config.engine.threads, prefer="threads")(
            delayed(self.decide)(game, s, c) for s, c in pairs
        )

        lower, upper = ZERO, ONE
        for verdict in verdicts:
            if verdict.decision is Decision.AT_LEAST_C:
                lower = max(lower, verdict.s)
            else:
                upper = min(upper, verdict.certificate.objective)
        return ValueEstimate(
            lower=lower, upper=upper, epsilon=epsilon, method=EstimateMethod.GRID,
            decisions=len(verdicts), rounds=sum(v.rounds for v in verdicts),
        )

    def exact_value(self, game: Game) -> Tuple[Fraction, Strategy]:
        """Exact optimum of the strategy program and an optimal no-signaling strategy"""
        lp = build_primal(game)
        solution = self.exact_solver.solve(lp)
        if solution.status is not LPStatus.OPTIMAL:
            raise SolverError(f"strategy program reported {solution.status.value}")
        strategy = complete_strategy(game, relaxed_solution_from_values(game, solution.values))
        self.logger.info("Exact value", value=str(solution.objective), pivots=solution.pivots)
        return solution.objective, strategy

    def classical_value(self, game: Game) -> Fraction:
        """Best deterministic local strategy; prover 2 best-responds per question"""
        value, _ = self.classical_strategy(game)
        return value

    def classical_strategy(self, game: Game) -> Tuple[Fraction, Strategy]:
        n1, n2, m1, m2 = game.dimensions
        assignments = m1 ** n1 * m2 ** n2
        guard = self.config.exact.classical_max_assignments
        if assignments > guard:
            raise EnumerationTooLarge(f"{assignments} deterministic strategy pairs exceed the guard of {guard}")

        # integer weights over a common denominator
        weights = {key: game.pi_of(key[0], key[1]) * value for key, value in game.payoff.items()}
        denominator = reduce(math.lcm, (w.denominator for w in weights.values()), 1)
        scaled = [[[[0] * m2 for _ in range(m1)] for _ in range(n2)] for _ in range(n1)]
        for (q1, q2, a1, a2), weight in weights.items():
            scaled[q1][q2][a1][a2] = weight.numerator * (denominator // weight.denominator)

        best, best_f1, best_f2 = -1, None, None
        for f1 in itertools.product(range(m1), repeat=n1):
            total = 0
            f2 = []
            for q2 in range(n2):
                gains = [sum(scaled[q1][q2][f1[q1]][a2] for q1 in range(n1)) for a2 in range(m2)]
                choice = max(range(m2), key=gains.__getitem__)
                f2.append(choice)
                total += gains[choice]
            if total > best:
                best, best_f1, best_f2 = total, f1, tuple(f2)

        value = Fraction(best, denominator)
        self.logger.info("Classical value", value=str(value), assignments=assignments)
        return value, deterministic_strategy(best_f1, best_f2, m1, m2)

    def check_proof_system(self, spec: VerifierSpec, c: Number, s: Number) -> ProofSystemCheck:
        """Compile the verifier, compute w_ns exactly and test it against c and s"""
        c, s = to_fraction(c), to_fraction(s)
        if not ZERO <= s < c <= ONE:
            raise InvalidThresholds(f"need 0 <= s < c <= 1, got s = {s}, c = {c}")
        game = compile_game(spec, self.config.verifier.max_randomness_bits)
        value, _ = self.exact_value(game)
        return ProofSystemCheck(
            verifier=spec.name, value=value, completeness=c, soundness=s,
            meets_completeness=value >= c, meets_soundness=value <= s,
        )


def decide(game: Game, s: Number, c: Number, config: Optional[NSValueConfig] = None) -> Verdict:
    return ValueEngine(config).decide(game, s, c)


def approximate_value(
    game: Game,
    epsilon: Number,
    method: Optional[Union[EstimateMethod, str]] = None,
    config: Optional[NSValueConfig] = None,
) -> ValueEstimate:
    return ValueEngine(config).approximate_value(game, epsilon, method)


def exact_value(game: Game, config: Optional[NSValueConfig] = None) -> Tuple[Fraction, Strategy]:
    return ValueEngine(config).exact_value(game)


def classical_value(game: Game, config: Optional[NSValueConfig] = None) -> Fraction:
    return ValueEngine(config).classical_value(game)


def check_proof_system(
    spec: VerifierSpec, c: Number, s: Number, config: Optional[NSValueConfig] = None
) -> ProofSystemCheck:
    return ValueEngine(config).check_proof_system(spec, c, s)
