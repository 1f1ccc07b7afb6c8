"""
The chain of linear programs that carries the no-signaling value

    primal -> relaxed -> scaled -> dual -> final (clipped and complemented)

Every stage is materialized as its own LinearProgram so it can be dumped and
solved independently. Rows inside a block are emitted in lexicographic order
of their index tuple.
"""
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import structlog

from src.models.game import Game
from src.models.linear_program import (
    Constraint,
    LinearProgram,
    LPStage,
    Relation,
    Sense,
    Variable,
    indexed_name,
)
from src.models.mpc import MPCInstance
from src.utils.errors import ShapeMismatch
from src.utils.rationals import ONE, ZERO

logger = structlog.get_logger()

# dual variable block for each primal row block, dual row block for each primal variable block
DUAL_VARIABLE_BLOCKS = {"con1": "y1", "con2": "y2", "con3_1": "z1", "con3_2": "z2"}
DUAL_ROW_BLOCKS = {"x": "dcon1", "p1": "dcon2", "p2": "dcon3"}
COMPLEMENTED_BLOCKS = {"y1": "ybar1", "y2": "ybar2"}
FINAL_ROW_BLOCKS = {"dcon1": "con1", "dcon2": "con2", "dcon3": "con3"}

STAGE_NAMES = ("primal", "relaxed", "scaled", "dual", "final", "mpc")


def _name(block: str, *index: int) -> str:
    return indexed_name(block, index)


def _require(lp: LinearProgram, stage: LPStage, blocks: Tuple[str, ...]) -> Tuple[int, int, int, int]:
    if lp.stage is not stage:
        raise ShapeMismatch(f"expected a {stage.value} program, got {lp.stage.value}")
    if lp.dimensions is None:
        raise ShapeMismatch(f"{stage.value} program carries no game dimensions")
    present = {row.block for row in lp.constraints} | {var.block for var in lp.variables}
    missing = [block for block in blocks if block not in present]
    if missing:
        raise ShapeMismatch(f"{stage.value} program lacks blocks {missing}")
    return lp.dimensions


def build_primal(game: Game) -> LinearProgram:
    """Maximize the acceptance probability over no-signaling p with marginals p1, p2"""
    n1, n2, m1, m2 = game.dimensions

    variables: List[Variable] = []
    variables += [Variable(block="p", index=idx) for idx in game.answer_indices()]
    variables += [Variable(block="p1", index=(q1, a1)) for q1 in range(n1) for a1 in range(m1)]
    variables += [Variable(block="p2", index=(q2, a2)) for q2 in range(n2) for a2 in range(m2)]

    objective = {}
    for (q1, q2, a1, a2) in game.answer_indices():
        weight = game.pi_of(q1, q2) * game.payoff_of(q1, q2, a1, a2)
        if weight:
            objective[_name("p", q1, q2, a1, a2)] = weight

    rows: List[Constraint] = []
    for q1, q2 in game.question_pairs():
        for a1 in range(m1):
            coeffs = {_name("p", q1, q2, a1, a2): ONE for a2 in range(m2)}
            coeffs[_name("p1", q1, a1)] = -ONE
            rows.append(Constraint(block="con1", index=(q1, q2, a1), coefficients=coeffs, relation=Relation.EQ, rhs=ZERO))
    for q1, q2 in game.question_pairs():
        for a2 in range(m2):
            coeffs = {_name("p", q1, q2, a1, a2): ONE for a1 in range(m1)}
            coeffs[_name("p2", q2, a2)] = -ONE
            rows.append(Constraint(block="con2", index=(q1, q2, a2), coefficients=coeffs, relation=Relation.EQ, rhs=ZERO))
    for q1, q2 in game.question_pairs():
        coeffs = {_name("p", q1, q2, a1, a2): ONE for a1 in range(m1) for a2 in range(m2)}
        rows.append(Constraint(block="con3", index=(q1, q2), coefficients=coeffs, relation=Relation.EQ, rhs=ONE))

    return LinearProgram(
        stage=LPStage.PRIMAL,
        sense=Sense.MAXIMIZE,
        variables=tuple(variables),
        objective=objective,
        constraints=tuple(rows),
        dimensions=game.dimensions,
    )


def relax_primal(lp: LinearProgram) -> LinearProgram:
    """Marginal equalities become <=; per-pair normalization moves onto p1 and p2"""
    n1, n2, m1, m2 = _require(lp, LPStage.PRIMAL, ("con1", "con2", "con3", "p", "p1", "p2"))

    rows: List[Constraint] = []
    for block in ("con1", "con2"):
        for row in lp.rows(block):
            if row.relation is not Relation.EQ:
                raise ShapeMismatch(f"row {row.name} is not an equality")
            rows.append(row.model_copy(update={"relation": Relation.LE}))
    for q1 in range(n1):
        coeffs = {_name("p1", q1, a1): ONE for a1 in range(m1)}
        rows.append(Constraint(block="con3_1", index=(q1,), coefficients=coeffs, relation=Relation.EQ, rhs=ONE))
    for q2 in range(n2):
        coeffs = {_name("p2", q2, a2): ONE for a2 in range(m2)}
        rows.append(Constraint(block="con3_2", index=(q2,), coefficients=coeffs, relation=Relation.EQ, rhs=ONE))

    return LinearProgram(
        stage=LPStage.RELAXED,
        sense=lp.sense,
        variables=lp.variables,
        objective=dict(lp.objective),
        constraints=tuple(rows),
        dimensions=lp.dimensions,
    )


def scale_by_pi(lp: LinearProgram, game: Game) -> LinearProgram:
    """Substitute x(a1,a2|q1,q2) = pi(q1,q2) p(a1,a2|q1,q2)"""
    dims = _require(lp, LPStage.RELAXED, ("con1", "con2", "con3_1", "con3_2", "p"))
    if dims != game.dimensions:
        raise ShapeMismatch(f"program dimensions {dims} differ from game {game.dimensions}")
    blocks = {var.name: var for var in lp.variables}

    def renamed(var: Variable) -> Variable:
        return Variable(block="x", index=var.index, free=var.free) if var.block == "p" else var

    variables = tuple(renamed(var) for var in lp.variables)

    objective: Dict[str, Fraction] = {}
    for name, coef in lp.objective.items():
        var = blocks[name]
        if var.block != "p":
            objective[name] = coef
    for (q1, q2, a1, a2) in game.answer_indices():
        prob = game.pi_of(q1, q2)
        weight = lp.objective.get(_name("p", q1, q2, a1, a2), ZERO) / prob if prob else game.payoff_of(q1, q2, a1, a2)
        if weight:
            objective[_name("x", q1, q2, a1, a2)] = weight

    rows: List[Constraint] = []
    for row in lp.constraints:
        if row.block not in ("con1", "con2"):
            rows.append(row)
            continue
        prob = game.pi_of(row.index[0], row.index[1])
        coeffs: Dict[str, Fraction] = {}
        for name, coef in row.coefficients.items():
            var = blocks[name]
            if var.block == "p":
                coeffs[renamed(var).name] = coef
            elif prob:
                coeffs[name] = coef * prob
        rows.append(row.model_copy(update={"coefficients": coeffs}))

    return LinearProgram(
        stage=LPStage.SCALED,
        sense=lp.sense,
        variables=variables,
        objective=objective,
        constraints=tuple(rows),
        dimensions=lp.dimensions,
    )


def dualize(lp: LinearProgram) -> LinearProgram:
    """
    Standard LP dual of a maximization with <= and = rows.

    A <= row gets a nonnegative multiplier, an = row a free one; a
    nonnegative primal variable gives a >= dual row, a free one an = row.
    """
    if lp.sense is not Sense.MAXIMIZE:
        raise ShapeMismatch("dualize expects a maximization program")

    dual_vars: List[Variable] = []
    dual_objective: Dict[str, Fraction] = {}
    columns: Dict[str, Dict[str, Fraction]] = {var.name: {} for var in lp.variables}
    for row in lp.constraints:
        if row.relation is Relation.GE:
            raise ShapeMismatch(f"row {row.name} is a >= row; expected <= or =")
        block = DUAL_VARIABLE_BLOCKS.get(row.block, f"y_{row.block}")
        var = Variable(block=block, index=row.index, free=row.relation is Relation.EQ)
        dual_vars.append(var)
        if row.rhs:
            dual_objective[var.name] = row.rhs
        for name, coef in row.coefficients.items():
            if coef:
                columns[name][var.name] = coef

    dual_rows: List[Constraint] = []
    for var in lp.variables:
        dual_rows.append(Constraint(
            block=DUAL_ROW_BLOCKS.get(var.block, f"d{var.block}"),
            index=var.index,
            coefficients=columns[var.name],
            relation=Relation.EQ if var.free else Relation.GE,
            rhs=lp.objective.get(var.name, ZERO),
        ))

    return LinearProgram(
        stage=LPStage.DUAL,
        sense=Sense.MINIMIZE,
        variables=tuple(dual_vars),
        objective=dual_objective,
        constraints=tuple(dual_rows),
        dimensions=lp.dimensions,
    )


def clip_and_complement(lp: LinearProgram, game: Game) -> LinearProgram:
    """
    Bound y1, y2 by 1 and substitute y = 1 - ybar.

    The result minimizes sum z1 + sum z2 with only nonnegative coefficients:
    ybar1 + ybar2 <= 2 - R, z1 + sum pi ybar1 >= pi1, z2 + sum pi ybar2 >= pi2,
    ybar <= 1, everything >= 0.
    """
    dims = _require(lp, LPStage.DUAL, ("y1", "y2", "z1", "z2", "dcon1", "dcon2", "dcon3"))
    if dims != game.dimensions:
        raise ShapeMismatch(f"program dimensions {dims} differ from game {game.dimensions}")

    complemented: Dict[str, Variable] = {}
    variables: List[Variable] = []
    for var in lp.variables:
        if var.block in COMPLEMENTED_BLOCKS:
            new = Variable(block=COMPLEMENTED_BLOCKS[var.block], index=var.index)
            complemented[var.name] = new
        else:
            # z is implied nonnegative by the marginal rows
            new = Variable(block=var.block, index=var.index)
        variables.append(new)

    for name in lp.objective:
        if name in complemented:
            raise ShapeMismatch(f"objective depends on {name}; complementing would add a constant")

    rows: List[Constraint] = []
    for row in lp.constraints:
        rhs = row.rhs
        coeffs: Dict[str, Fraction] = {}
        for name, coef in row.coefficients.items():
            if name in complemented:
                coeffs[complemented[name].name] = -coef
                rhs -= coef
            else:
                coeffs[name] = coef
        relation = row.relation
        if coeffs and all(coef <= 0 for coef in coeffs.values()):
            coeffs = {name: -coef for name, coef in coeffs.items()}
            rhs = -rhs
            relation = relation.flipped()
        rows.append(Constraint(
            block=FINAL_ROW_BLOCKS.get(row.block, row.block),
            index=row.index,
            coefficients=coeffs,
            relation=relation,
            rhs=rhs,
        ))

    pi1, pi2 = game.question_marginals()
    for row in rows:
        if row.block in ("con2", "con3"):
            expected = pi1[row.index[0]] if row.block == "con2" else pi2[row.index[0]]
            if row.relation is not Relation.GE or row.rhs != expected:
                raise ShapeMismatch(f"row {row.name} is not a covering row against the question marginal")

    for block, bound_block in (("ybar1", "con4"), ("ybar2", "con5")):
        for var in variables:
            if var.block == block:
                rows.append(Constraint(
                    block=bound_block, index=var.index,
                    coefficients={var.name: ONE}, relation=Relation.LE, rhs=ONE,
                ))

    return LinearProgram(
        stage=LPStage.FINAL,
        sense=Sense.MINIMIZE,
        variables=tuple(variables),
        objective=dict(lp.objective),
        constraints=tuple(rows),
        dimensions=lp.dimensions,
    )


def build_chain(game: Game) -> Dict[LPStage, LinearProgram]:
    """All five programs of the chain, keyed by stage"""
    primal = build_primal(game)
    relaxed = relax_primal(primal)
    scaled = scale_by_pi(relaxed, game)
    dual = dualize(scaled)
    final = clip_and_complement(dual, game)
    return {
        LPStage.PRIMAL: primal,
        LPStage.RELAXED: relaxed,
        LPStage.SCALED: scaled,
        LPStage.DUAL: dual,
        LPStage.FINAL: final,
    }


def build_stage(
    game: Game,
    stage: str,
    s: Optional[Fraction] = None,
    bound_z: bool = False,
) -> Union[LinearProgram, MPCInstance]:
    """Run the chain up to the named stage; "mpc" needs the threshold s"""
    if stage not in STAGE_NAMES:
        raise ShapeMismatch(f"unknown stage {stage!r}; choose from {', '.join(STAGE_NAMES)}")
    if stage == "mpc":
        from src.lp.mpc_reduction import build_mpc_instance

        if s is None:
            raise ShapeMismatch("stage mpc needs a threshold s")
        return build_mpc_instance(game, s, bound_z=bound_z)

    lp = build_primal(game)
    if stage != "primal":
        lp = relax_primal(lp)
    if stage not in ("primal", "relaxed"):
        lp = scale_by_pi(lp, game)
    if stage in ("dual", "final"):
        lp = dualize(lp)
    if stage == "final":
        lp = clip_and_complement(lp, game)
    logger.debug("Built LP stage", stage=stage, variables=len(lp.variables), rows=len(lp.constraints))
    return lp
