"""
Mixed packing and covering solver

Finds x >= 0 with A x <= (1+eps) b and C x >= d, or proves that no x >= 0
satisfies A x <= b and C x >= d. The search is a multiplicative-weights
scheme over smoothed potentials

    Lmax(x) = (1/eta) ln sum_i exp(eta (A x / b)_i)      packing rows
    Lmin(x) = -(1/eta) ln sum_j exp(-eta (C x / d)_j)    unmet covering rows

Each round every column whose packing gradient is at most (1 + gamma) times
its covering gradient grows multiplicatively; the step is the largest power
of two multiple of a safe step that keeps the growth of Lmax within
(1 + rho eps) of the growth of Lmin. When no column has packing gradient <=
covering gradient the potential weights form a Lagrangian infeasibility
certificate, which is re-checked exactly before Infeasible is reported.
Approx answers are rationalized and verified exactly as well.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from src.engines.base_engine import BaseEngine
from src.models.mpc import MPCInstance, MPCOutcome, OutcomeKind
from src.solvers.exact_simplex import ExactSimplexSolver, exact_mpc_feasibility
from src.utils.config import NSValueConfig
from src.utils.errors import DimensionMismatch, InvalidEpsilon, SolverError
from src.utils.rationals import ONE, ZERO, to_fraction

EARLY_STOP_SHARE = 0.95
COVER_MARGIN = 1e-9
MAX_STEP_DOUBLINGS = 40
WEIGHT_BITS = 53


def check_epsilon(epsilon: Union[Fraction, float, int, str]) -> Fraction:
    value = to_fraction(epsilon)
    if not ZERO < value < ONE:
        raise InvalidEpsilon(f"epsilon = {value} must lie strictly between 0 and 1")
    return value


def verify_approx_solution(
    instance: MPCInstance,
    x: Sequence[Union[Fraction, float, int]],
    r: Union[Fraction, float, int, str],
) -> bool:
    """x >= 0, A x <= r b and C x >= d, evaluated exactly after rationalizing x"""
    if len(x) != instance.n_columns:
        raise DimensionMismatch(f"vector has {len(x)} entries, the instance has {instance.n_columns} columns")
    r = to_fraction(r)
    if r < ONE:
        raise InvalidEpsilon(f"approximation factor r = {r} must be at least 1")
    values = [to_fraction(v) for v in x]
    if any(v < 0 for v in values):
        return False
    for i, entries in enumerate(instance.packing_rows()):
        if sum((v * values[j] for j, v in entries), ZERO) > r * instance.b[i]:
            return False
    for i, entries in enumerate(instance.covering_rows()):
        if sum((v * values[j] for j, v in entries), ZERO) < instance.d[i]:
            return False
    return True


@dataclass
class _Presolved:
    """Instance restricted to usable rows and columns, rows divided by their rhs"""

    live: np.ndarray
    packing: Union[np.ndarray, sparse.csr_matrix]
    covering: Union[np.ndarray, sparse.csr_matrix]
    packing_columns: List[List[Tuple[int, Fraction]]]
    covering_columns: List[List[Tuple[int, Fraction]]]
    dense: bool
    infeasible_reason: str = ""
    n_columns: int = 0

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.packing.shape[0], self.covering.shape[0], len(self.live)

    def matvec(self, matrix, x: np.ndarray) -> np.ndarray:
        if self.dense:
            return (matrix * x).sum(axis=1)
        return matrix @ x

    def rmatvec(self, matrix, w: np.ndarray) -> np.ndarray:
        if self.dense:
            return (matrix * w[:, None]).sum(axis=0)
        return matrix.T @ w

    def expand(self, x_live: np.ndarray) -> np.ndarray:
        full = np.zeros(self.n_columns)
        full[self.live] = x_live
        return full


@dataclass
class _Attempt:
    status: str
    x: Optional[np.ndarray] = None
    rounds: int = 0
    trials: int = 0
    detail: Dict[str, float] = field(default_factory=dict)


def _smoothed_max(values: np.ndarray, eta: float) -> float:
    top = values.max()
    return float(top + np.log(np.exp(eta * (values - top)).sum()) / eta)


def _smoothed_min(values: np.ndarray, eta: float) -> float:
    bottom = values.min()
    return float(bottom - np.log(np.exp(-eta * (values - bottom)).sum()) / eta)


class MixedPackingCoveringSolver(BaseEngine):
    """Approximate feasibility for A x <= b, C x >= d with nonnegative data"""

    def __init__(self, config: Optional[NSValueConfig] = None, exact_solver: Optional[ExactSimplexSolver] = None):
        super().__init__(config, name="mpc-solver")
        self.settings = self.config.solver
        self.exact_solver = exact_solver or ExactSimplexSolver(
            max_variables=self.config.exact.max_variables,
            max_pivots=self.config.exact.max_pivots,
        )

    def solve(self, instance: MPCInstance, epsilon: Union[Fraction, float, int, str]) -> MPCOutcome:
        eps = check_epsilon(epsilon)
        self.log_processing_start("solve_mpc", {
            "packing_rows": instance.n_packing,
            "covering_rows": instance.n_covering,
            "columns": instance.n_columns,
            "epsilon": float(eps),
        })
        if self.settings.exact_mode and instance.n_columns <= self.settings.exact_max_columns:
            outcome = self._solve_exact(instance, eps, rounds=0, trials=0, reason="exact mode")
        else:
            outcome = self._solve_iterative(instance, eps)
        self.log_processing_complete("solve_mpc", {
            "outcome": outcome.kind.value,
            "rounds": outcome.rounds,
            "trials": outcome.trials,
            "reason": outcome.reason,
        })
        return outcome

    def _solve_exact(self, instance: MPCInstance, eps: Fraction, rounds: int, trials: int, reason: str) -> MPCOutcome:
        point = exact_mpc_feasibility(instance, self.exact_solver)
        if point is None:
            return MPCOutcome(kind=OutcomeKind.INFEASIBLE, rounds=rounds, trials=trials, epsilon=eps,
                              reason=f"{reason}: no exact feasible point")
        return MPCOutcome(kind=OutcomeKind.APPROX, x=tuple(point), rounds=rounds, trials=trials, epsilon=eps,
                          reason=f"{reason}: exact feasible point")

    def _solve_iterative(self, instance: MPCInstance, eps: Fraction) -> MPCOutcome:
        pre = self._presolve(instance)
        if pre.infeasible_reason:
            return MPCOutcome(kind=OutcomeKind.INFEASIBLE, epsilon=eps, reason=pre.infeasible_reason)

        m1, m2, n = pre.shape
        if m2 == 0:
            return MPCOutcome(kind=OutcomeKind.APPROX, x=tuple([ZERO] * instance.n_columns), epsilon=eps,
                              reason="no covering rows")
        if m1 == 0:
            return self._cover_without_packing(instance, pre, eps)

        rounds = trials = 0
        step_fraction = self.settings.step_fraction
        for attempt in range(self.settings.tightening_retries + 1):
            result = self._run_attempt(pre, float(eps), step_fraction)
            rounds += result.rounds
            trials += result.trials
            self.logger.debug("Attempt finished", attempt=attempt, status=result.status,
                              rounds=result.rounds, trials=result.trials, **result.detail)

            if result.status == "certificate":
                return MPCOutcome(kind=OutcomeKind.INFEASIBLE, rounds=rounds, trials=trials, epsilon=eps,
                                  reason="exactly checked Lagrangian certificate")
            if result.x is not None:
                candidate = [Fraction(float(v)) for v in pre.expand(result.x)]
                if verify_approx_solution(instance, candidate, ONE + eps):
                    return MPCOutcome(kind=OutcomeKind.APPROX, x=tuple(candidate), rounds=rounds, trials=trials,
                                      epsilon=eps, reason="verified exactly")
                self.logger.warning("Candidate failed exact verification", attempt=attempt)
            step_fraction /= 2

        if instance.n_columns <= self.settings.exact_max_columns:
            self.logger.warning("Falling back to the exact oracle", rounds=rounds)
            return self._solve_exact(instance, eps, rounds=rounds, trials=trials, reason="exact fallback")
        self.logger.error("Solver gave up", rounds=rounds, trials=trials)
        raise SolverError(
            f"no verified answer after {self.settings.tightening_retries + 1} attempts and {rounds} rounds"
        )

    def _presolve(self, instance: MPCInstance) -> _Presolved:
        packing_rows = instance.packing_rows()
        covering_rows = instance.covering_rows()

        # a zero packing budget pins every column it touches at 0
        dead = set()
        for i, entries in enumerate(packing_rows):
            if instance.b[i] == 0:
                dead.update(j for j, v in entries if v > 0)
        live = [j for j in range(instance.n_columns) if j not in dead]
        local = {j: k for k, j in enumerate(live)}

        kept_packing = []
        for i, entries in enumerate(packing_rows):
            if instance.b[i] > 0:
                row = [(local[j], v / instance.b[i]) for j, v in entries if j in local and v > 0]
                if row:
                    kept_packing.append(row)

        kept_covering = []
        for i, entries in enumerate(covering_rows):
            if instance.d[i] == 0:
                continue
            row = [(local[j], v / instance.d[i]) for j, v in entries if j in local and v > 0]
            if not row:
                name = instance.covering_names[i] if instance.covering_names else f"C[{i}]"
                return _Presolved(
                    live=np.array(live, dtype=np.int64),
                    packing=np.zeros((0, 0)), covering=np.zeros((0, 0)),
                    packing_columns=[], covering_columns=[], dense=True,
                    infeasible_reason=f"covering row {name} has no usable column",
                    n_columns=instance.n_columns,
                )
            kept_covering.append(row)

        n = len(live)
        dense = (len(kept_packing) + len(kept_covering)) * n <= self.settings.dense_max_entries
        packing_columns: List[List[Tuple[int, Fraction]]] = [[] for _ in range(n)]
        covering_columns: List[List[Tuple[int, Fraction]]] = [[] for _ in range(n)]
        for i, row in enumerate(kept_packing):
            for k, v in row:
                packing_columns[k].append((i, v))
        for i, row in enumerate(kept_covering):
            for k, v in row:
                covering_columns[k].append((i, v))

        return _Presolved(
            live=np.array(live, dtype=np.int64),
            packing=_float_matrix(kept_packing, n, dense),
            covering=_float_matrix(kept_covering, n, dense),
            packing_columns=packing_columns,
            covering_columns=covering_columns,
            dense=dense,
            n_columns=instance.n_columns,
        )

    def _cover_without_packing(self, instance: MPCInstance, pre: _Presolved, eps: Fraction) -> MPCOutcome:
        """Only covering rows are left: a large enough uniform x covers them"""
        row_sums: Dict[int, Fraction] = {}
        for column in pre.covering_columns:
            for j, v in column:
                row_sums[j] = row_sums.get(j, ZERO) + v
        level = max(ONE / total for total in row_sums.values())
        x = [ZERO] * instance.n_columns
        for k, j in enumerate(pre.live):
            if pre.covering_columns[k]:
                x[int(j)] = level
        return MPCOutcome(kind=OutcomeKind.APPROX, x=tuple(x), epsilon=eps, reason="no binding packing rows")

    def _run_attempt(self, pre: _Presolved, eps: float, step_fraction: float) -> _Attempt:
        m1, m2, n = pre.shape
        P, C = pre.packing, pre.covering
        eta = self.settings.potential_scale * (math.log(m1) + math.log(m2) + 1.0) / eps
        beta = step_fraction * eps
        gamma = self.settings.qualify_fraction * eps
        rho = 1.0 + self.settings.acceptance_ratio * eps
        target = 1.0 + EARLY_STOP_SHARE * eps
        max_rounds = math.ceil(self.settings.round_safety_factor * (m1 * (1 + eps) + m2 + 1) * eta / beta)

        colmax = np.maximum(_column_max(P, pre.dense, n), _column_max(C, pre.dense, n))
        covers = np.array([bool(column) for column in pre.covering_columns])
        x = np.where(covers, beta / (eta * n * np.where(colmax > 0, colmax, 1.0)), 0.0)

        rounds = trials = 0
        scale = 1.0
        while rounds < max_rounds:
            px = pre.matvec(P, x)
            cx = pre.matvec(C, x)
            lowest = cx.min()
            if lowest > 0:
                ratio = px.max() / lowest
                if ratio <= target and (self.settings.early_stop or lowest >= 1.0):
                    return _Attempt("approx", x * (1.0 + COVER_MARGIN) / lowest, rounds, trials, {"ratio": ratio})
                if lowest >= 1.0:
                    return _Attempt("overshoot", None, rounds, trials, {"ratio": ratio})

            rounds += 1
            active = cx < 1.0
            wp = np.exp(eta * (px - px.max()))
            wc = np.where(active, np.exp(-eta * (cx - cx[active].min())), 0.0)
            gp = pre.rmatvec(P, wp) / wp.sum()
            gc = pre.rmatvec(C, wc) / wc.sum()

            eligible = gc > 0
            if not np.any(eligible & (gp <= gc)) and self._certificate_holds(pre, wp, wc):
                return _Attempt("certificate", None, rounds, trials)

            chosen = eligible & (gp <= (1.0 + gamma) * gc)
            if not chosen.any():
                return _Attempt("stalled", None, rounds, trials)

            step = np.where(chosen, x, 0.0)
            dp = pre.matvec(P, step)
            dc = pre.matvec(C, step)
            change = max(dp.max(), dc[active].max())
            alpha_min = beta / (eta * change)

            base_max = _smoothed_max(px, eta)
            base_min = _smoothed_min(cx[active], eta)

            def accepted(alpha: float) -> bool:
                nonlocal trials
                trials += 1
                grown_min = _smoothed_min((cx + alpha * dc)[active], eta) - base_min
                grown_max = _smoothed_max(px + alpha * dp, eta) - base_max
                return grown_min > 0 and grown_max <= rho * grown_min

            limit = 2.0 ** MAX_STEP_DOUBLINGS
            if scale > 1.0 and not accepted(alpha_min * scale):
                while scale > 1.0:
                    scale = max(1.0, scale / 2)
                    if scale == 1.0 or accepted(alpha_min * scale):
                        break
            else:
                while scale < limit and accepted(alpha_min * scale * 2):
                    scale *= 2

            x = x + alpha_min * scale * step

        return _Attempt("exhausted", None, rounds, trials, {"max_rounds": max_rounds})

    def _certificate_holds(self, pre: _Presolved, wp: np.ndarray, wc: np.ndarray) -> bool:
        """
        Exact check on integer-rounded weights: for every column with positive
        weighted covering mass, packing mass * sum(cover) > covering mass * sum(pack).
        """
        unit = float(2 ** WEIGHT_BITS)
        pack = [int(round(v * unit)) for v in wp]
        cover = [int(round(v * unit)) for v in wc]
        total_pack, total_cover = sum(pack), sum(cover)
        if total_pack == 0 or total_cover == 0:
            return False
        for k in range(len(pre.live)):
            covered = sum((cover[j] * v for j, v in pre.covering_columns[k] if cover[j]), ZERO)
            if not covered:
                continue
            packed = sum((pack[i] * v for i, v in pre.packing_columns[k] if pack[i]), ZERO)
            if packed * total_cover <= covered * total_pack:
                return False
        return True


def _float_matrix(rows: List[List[Tuple[int, Fraction]]], n: int, dense: bool):
    if dense:
        matrix = np.zeros((len(rows), n))
        for i, row in enumerate(rows):
            for k, v in row:
                matrix[i, k] += float(v)
        return matrix
    entries = [(i, k, float(v)) for i, row in enumerate(rows) for k, v in row]
    if not entries:
        return sparse.csr_matrix((len(rows), n))
    r, c, v = zip(*entries)
    matrix = sparse.coo_matrix((np.array(v), (np.array(r), np.array(c))), shape=(len(rows), n)).tocsr()
    matrix.sum_duplicates()
    matrix.sort_indices()
    return matrix


def _column_max(matrix, dense: bool, n: int) -> np.ndarray:
    if matrix.shape[0] == 0:
        return np.zeros(n)
    if dense:
        return matrix.max(axis=0)
    return matrix.max(axis=0).toarray().ravel()


def solve_mpc(
    instance: MPCInstance,
    epsilon: Union[Fraction, float, int, str],
    config: Optional[NSValueConfig] = None,
) -> MPCOutcome:
    return MixedPackingCoveringSolver(config).solve(instance, epsilon)
