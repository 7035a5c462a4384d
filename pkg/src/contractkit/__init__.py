"""Simulation preorder and assume/guarantee contracts for linear systems in
driving-variable form, decided with exact rational subspace computations."""

from .composition import compose, composed_consistent_subspace
from .contracts import (
    Contract,
    RefinementVerdict,
    implements,
    is_compatible_environment,
    refines,
    saturate,
)
from .errors import ContractkitError, DimensionMismatch, ExternalDimMismatch, ParseError
from .simulation import (
    FailureReason,
    SimulationRelation,
    SimulationVerdict,
    check_relation,
    composition_upper_witness,
    infimum_witness,
    largest_simulation_relation,
    simulates,
    transitive_witness,
)
from .subspace import Matrix, Subspace
from .system import DVSystem, consistent_subspace, is_consistent_state, validate

__version__ = "0.1.0"

__all__ = [
    "Contract",
    "ContractkitError",
    "DVSystem",
    "DimensionMismatch",
    "ExternalDimMismatch",
    "FailureReason",
    "Matrix",
    "ParseError",
    "RefinementVerdict",
    "SimulationRelation",
    "SimulationVerdict",
    "Subspace",
    "check_relation",
    "compose",
    "composed_consistent_subspace",
    "composition_upper_witness",
    "consistent_subspace",
    "implements",
    "infimum_witness",
    "is_compatible_environment",
    "is_consistent_state",
    "largest_simulation_relation",
    "refines",
    "saturate",
    "simulates",
    "transitive_witness",
    "validate",
]
