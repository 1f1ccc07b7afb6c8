"""
Linear programs of the value reduction, strategy completion and certificate repair
"""

from .pipeline import (
    build_chain,
    build_primal,
    build_stage,
    clip_and_complement,
    dualize,
    relax_primal,
    scale_by_pi,
)
from .completion import complete_strategy, relaxed_solution_from_values
from .mpc_reduction import (
    MPCLayout,
    build_mpc_instance,
    certificate_from_vector,
    certificate_values,
    certificate_violations,
    repair_approx_solution,
)

__all__ = [
    "build_chain",
    "build_primal",
    "build_stage",
    "clip_and_complement",
    "dualize",
    "relax_primal",
    "scale_by_pi",
    "complete_strategy",
    "relaxed_solution_from_values",
    "MPCLayout",
    "build_mpc_instance",
    "certificate_from_vector",
    "certificate_values",
    "certificate_violations",
    "repair_approx_solution",
]
