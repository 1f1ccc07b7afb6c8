"""
Data models for nsvalue
"""

from .game import Game, GameTables, SignalingReport, Strategy
from .verifier import VerifierSpec
from .linear_program import (
    Constraint,
    LinearProgram,
    LPSolution,
    LPStage,
    LPStatus,
    Relation,
    Sense,
    Variable,
)
from .certificates import ComplementedCertificate, RelaxedSolution
from .mpc import MPCInstance, MPCOutcome, OutcomeKind
from .verdict import Decision, EstimateMethod, ProofSystemCheck, ValueEstimate, Verdict
from .report import RunReport

__all__ = [
    "Game",
    "GameTables",
    "SignalingReport",
    "Strategy",
    "VerifierSpec",
    "Constraint",
    "LinearProgram",
    "LPSolution",
    "LPStage",
    "LPStatus",
    "Relation",
    "Sense",
    "Variable",
    "ComplementedCertificate",
    "RelaxedSolution",
    "MPCInstance",
    "MPCOutcome",
    "OutcomeKind",
    "Decision",
    "EstimateMethod",
    "ProofSystemCheck",
    "ValueEstimate",
    "Verdict",
    "RunReport",
]
