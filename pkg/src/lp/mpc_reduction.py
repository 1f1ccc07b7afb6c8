"""
Packing/covering form of the complemented program and the repair of its
approximate solutions
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

import structlog

from src.models.certificates import ComplementedCertificate
from src.models.game import Game
from src.models.linear_program import indexed_name
from src.models.mpc import MPCInstance
from src.solvers.mpc_solver import verify_approx_solution
from src.utils.errors import DimensionMismatch, InvalidThresholds, NotApproxFeasible
from src.utils.rationals import ONE, ZERO, to_fraction

logger = structlog.get_logger()


@dataclass(frozen=True)
class MPCLayout:
    """Column order ybar1, ybar2, z1, z2, each block row-major in its index"""

    q1_count: int
    q2_count: int
    a1_count: int
    a2_count: int

    @classmethod
    def for_game(cls, game: Game) -> "MPCLayout":
        return cls(*game.dimensions)

    @property
    def ybar1_count(self) -> int:
        return self.q1_count * self.q2_count * self.a1_count

    @property
    def ybar2_count(self) -> int:
        return self.q1_count * self.q2_count * self.a2_count

    @property
    def n_columns(self) -> int:
        return self.ybar1_count + self.ybar2_count + self.q1_count + self.q2_count

    def ybar1(self, q1: int, q2: int, a1: int) -> int:
        return (q1 * self.q2_count + q2) * self.a1_count + a1

    def ybar2(self, q1: int, q2: int, a2: int) -> int:
        return self.ybar1_count + (q1 * self.q2_count + q2) * self.a2_count + a2

    def z1(self, q1: int) -> int:
        return self.ybar1_count + self.ybar2_count + q1

    def z2(self, q2: int) -> int:
        return self.ybar1_count + self.ybar2_count + self.q1_count + q2

    def column_names(self) -> Tuple[str, ...]:
        names = [
            indexed_name("ybar1", (q1, q2, a1))
            for q1 in range(self.q1_count) for q2 in range(self.q2_count) for a1 in range(self.a1_count)
        ]
        names += [
            indexed_name("ybar2", (q1, q2, a2))
            for q1 in range(self.q1_count) for q2 in range(self.q2_count) for a2 in range(self.a2_count)
        ]
        names += [indexed_name("z1", (q1,)) for q1 in range(self.q1_count)]
        names += [indexed_name("z2", (q2,)) for q2 in range(self.q2_count)]
        return tuple(names)


def build_mpc_instance(game: Game, s: Union[Fraction, int, str, float], bound_z: bool = False) -> MPCInstance:
    """
    Packing rows: sum z <= s, ybar1 + ybar2 <= 2 - R, ybar1 <= 1, ybar2 <= 1
    (and z1 <= pi1, z2 <= pi2 with bound_z). Covering rows: the two marginal
    rows z1 + sum pi ybar1 >= pi1 and z2 + sum pi ybar2 >= pi2.
    """
    s = to_fraction(s)
    if not ZERO <= s < ONE:
        raise InvalidThresholds(f"threshold s = {s} must lie in [0, 1)")
    layout = MPCLayout.for_game(game)
    n1, n2, m1, m2 = game.dimensions
    pi1, pi2 = game.question_marginals()

    A: List[Tuple[int, int, Fraction]] = []
    b: List[Fraction] = []
    packing_names: List[str] = []

    def packing(name: str, entries: Sequence[Tuple[int, Fraction]], rhs: Fraction) -> None:
        row = len(b)
        A.extend((row, col, value) for col, value in entries if value)
        b.append(rhs)
        packing_names.append(name)

    packing(
        "budget",
        [(layout.z1(q1), ONE) for q1 in range(n1)] + [(layout.z2(q2), ONE) for q2 in range(n2)],
        s,
    )
    for (q1, q2, a1, a2) in game.answer_indices():
        packing(
            indexed_name("con1", (q1, q2, a1, a2)),
            [(layout.ybar1(q1, q2, a1), ONE), (layout.ybar2(q1, q2, a2), ONE)],
            2 - game.payoff_of(q1, q2, a1, a2),
        )
    for q1, q2 in game.question_pairs():
        for a1 in range(m1):
            packing(indexed_name("con4", (q1, q2, a1)), [(layout.ybar1(q1, q2, a1), ONE)], ONE)
    for q1, q2 in game.question_pairs():
        for a2 in range(m2):
            packing(indexed_name("con5", (q1, q2, a2)), [(layout.ybar2(q1, q2, a2), ONE)], ONE)
    if bound_z:
        for q1 in range(n1):
            packing(indexed_name("zcap1", (q1,)), [(layout.z1(q1), ONE)], pi1[q1])
        for q2 in range(n2):
            packing(indexed_name("zcap2", (q2,)), [(layout.z2(q2), ONE)], pi2[q2])

    C: List[Tuple[int, int, Fraction]] = []
    d: List[Fraction] = []
    covering_names: List[str] = []
    for q1 in range(n1):
        for a1 in range(m1):
            row = len(d)
            C.append((row, layout.z1(q1), ONE))
            C.extend((row, layout.ybar1(q1, q2, a1), game.pi_of(q1, q2)) for q2 in range(n2) if game.pi_of(q1, q2))
            d.append(pi1[q1])
            covering_names.append(indexed_name("con2", (q1, a1)))
    for q2 in range(n2):
        for a2 in range(m2):
            row = len(d)
            C.append((row, layout.z2(q2), ONE))
            C.extend((row, layout.ybar2(q1, q2, a2), game.pi_of(q1, q2)) for q1 in range(n1) if game.pi_of(q1, q2))
            d.append(pi2[q2])
            covering_names.append(indexed_name("con3", (q2, a2)))

    instance = MPCInstance(
        n_packing=len(b),
        n_covering=len(d),
        n_columns=layout.n_columns,
        A=tuple(A),
        b=tuple(b),
        C=tuple(C),
        d=tuple(d),
        column_names=layout.column_names(),
        packing_names=tuple(packing_names),
        covering_names=tuple(covering_names),
    )
    logger.debug(
        "Built packing/covering instance",
        s=str(s), packing_rows=instance.n_packing, covering_rows=instance.n_covering, columns=instance.n_columns,
    )
    return instance


def certificate_from_vector(game: Game, x: Sequence[Fraction]) -> ComplementedCertificate:
    """Read (ybar1, ybar2, z1, z2) out of an instance column vector"""
    layout = MPCLayout.for_game(game)
    if len(x) != layout.n_columns:
        raise DimensionMismatch(f"vector has {len(x)} entries, the instance has {layout.n_columns} columns")
    n1, n2, m1, m2 = game.dimensions
    return ComplementedCertificate(
        ybar1={
            (q1, q2, a1): x[layout.ybar1(q1, q2, a1)]
            for q1 in range(n1) for q2 in range(n2) for a1 in range(m1)
        },
        ybar2={
            (q1, q2, a2): x[layout.ybar2(q1, q2, a2)]
            for q1 in range(n1) for q2 in range(n2) for a2 in range(m2)
        },
        z1={q1: x[layout.z1(q1)] for q1 in range(n1)},
        z2={q2: x[layout.z2(q2)] for q2 in range(n2)},
    )


def certificate_violations(game: Game, certificate: ComplementedCertificate) -> List[str]:
    """Names of the complemented-program rows the certificate breaks; empty iff feasible"""
    n1, n2, m1, m2 = game.dimensions
    pi1, pi2 = game.question_marginals()
    broken: List[str] = []

    for key, value in list(certificate.ybar1.items()) + list(certificate.ybar2.items()):
        if value < 0:
            broken.append(f"nonneg{key}")
    for q1, value in certificate.z1.items():
        if value < 0:
            broken.append(indexed_name("z1>=0", (q1,)))
    for q2, value in certificate.z2.items():
        if value < 0:
            broken.append(indexed_name("z2>=0", (q2,)))

    for (q1, q2, a1, a2) in game.answer_indices():
        if certificate.ybar1.get((q1, q2, a1), ZERO) + certificate.ybar2.get((q1, q2, a2), ZERO) > 2 - game.payoff_of(q1, q2, a1, a2):
            broken.append(indexed_name("con1", (q1, q2, a1, a2)))
    for q1 in range(n1):
        for a1 in range(m1):
            covered = certificate.z1.get(q1, ZERO) + sum(
                (game.pi_of(q1, q2) * certificate.ybar1.get((q1, q2, a1), ZERO) for q2 in range(n2)), ZERO
            )
            if covered < pi1[q1]:
                broken.append(indexed_name("con2", (q1, a1)))
    for q2 in range(n2):
        for a2 in range(m2):
            covered = certificate.z2.get(q2, ZERO) + sum(
                (game.pi_of(q1, q2) * certificate.ybar2.get((q1, q2, a2), ZERO) for q1 in range(n1)), ZERO
            )
            if covered < pi2[q2]:
                broken.append(indexed_name("con3", (q2, a2)))
    for (q1, q2, a1), value in certificate.ybar1.items():
        if value > 1:
            broken.append(indexed_name("con4", (q1, q2, a1)))
    for (q1, q2, a2), value in certificate.ybar2.items():
        if value > 1:
            broken.append(indexed_name("con5", (q1, q2, a2)))
    return broken


def repair_approx_solution(
    game: Game,
    approx: Sequence[Fraction],
    epsilon: Union[Fraction, int, str, float],
    s: Union[Fraction, int, str, float],
) -> Tuple[ComplementedCertificate, Fraction]:
    """
    Turn a (1+eps)-approximate solution of build_mpc_instance(game, s) into an
    exactly feasible point of the complemented program:
    ybar' = ybar / (1+eps), z' = z + eps * question marginal.
    Its objective is at most s + 3 eps, which bounds the value from above.
    """
    epsilon = to_fraction(epsilon)
    s = to_fraction(s)
    approx = [to_fraction(v) for v in approx]
    instance = build_mpc_instance(game, s)
    if not verify_approx_solution(instance, approx, ONE + epsilon):
        raise NotApproxFeasible(f"vector is not a (1+{epsilon})-approximate solution at s = {s}")

    raw = certificate_from_vector(game, approx)
    pi1, pi2 = game.question_marginals()
    shrink = ONE + epsilon
    repaired = ComplementedCertificate(
        ybar1={key: value / shrink for key, value in raw.ybar1.items()},
        ybar2={key: value / shrink for key, value in raw.ybar2.items()},
        z1={q1: value + epsilon * pi1[q1] for q1, value in raw.z1.items()},
        z2={q2: value + epsilon * pi2[q2] for q2, value in raw.z2.items()},
    )

    broken = certificate_violations(game, repaired)
    bound = s + 3 * epsilon
    if broken or repaired.objective > bound:
        raise NotApproxFeasible(
            f"repaired point violates {broken[:3]} or exceeds {bound}; objective {repaired.objective}"
        )
    logger.debug("Repaired approximate solution", objective=str(repaired.objective), bound=str(bound))
    return repaired, repaired.objective


def certificate_values(certificate: ComplementedCertificate) -> Dict[str, Fraction]:
    """Values keyed by variable name of the final program"""
    values = {indexed_name("ybar1", key): v for key, v in certificate.ybar1.items()}
    values.update({indexed_name("ybar2", key): v for key, v in certificate.ybar2.items()})
    values.update({indexed_name("z1", (q1,)): v for q1, v in certificate.z1.items()})
    values.update({indexed_name("z2", (q2,)): v for q2, v in certificate.z2.items()})
    return values
