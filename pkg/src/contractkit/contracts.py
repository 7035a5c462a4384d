"""Assume/guarantee contracts over driving-variable systems."""

from __future__ import annotations

from dataclasses import dataclass

from .composition import check_external_dims, compose
from .simulation import SimulationVerdict, simulates
from .system import DVSystem

__all__ = [
    "Contract",
    "RefinementVerdict",
    "is_compatible_environment",
    "implements",
    "refines",
    "saturate",
]


@dataclass(frozen=True)
class Contract:
    """Assumptions on the environment paired with guarantees on the closed loop."""

    assumptions: DVSystem
    guarantees: DVSystem
    name: str | None = None

    def __post_init__(self):
        check_external_dims(self.assumptions, self.guarantees)

    @property
    def p(self) -> int:
        return self.assumptions.p


@dataclass(frozen=True)
class RefinementVerdict:
    holds: bool
    env_part: SimulationVerdict
    guar_part: SimulationVerdict

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return "HOLDS"
        if not self.env_part.holds:
            return f"FAILS(assumptions:{self.env_part.failure_reason})"
        return f"FAILS(guarantees:{self.guar_part.failure_reason})"


def is_compatible_environment(E: DVSystem, C: Contract) -> SimulationVerdict:
    """An environment is compatible when the assumptions simulate it."""
    return simulates(E, C.assumptions)


def implements(Sigma: DVSystem, C: Contract) -> SimulationVerdict:
    """``Sigma`` implements ``C`` iff ``assumptions ∘ Sigma`` is simulated by the guarantees.

    The single environment ``assumptions`` suffices: every compatible
    environment composed with ``Sigma`` is simulated by ``assumptions ∘ Sigma``.
    """
    check_external_dims(Sigma, C.assumptions)
    return simulates(compose(C.assumptions, Sigma), C.guarantees)


def refines(Cprime: Contract, C: Contract) -> RefinementVerdict:
    """Does ``Cprime`` refine ``C``?

    Both legs are reported: ``env_part`` checks that the refined contract
    accepts every environment ``C`` accepts, ``guar_part`` that its guarantees,
    under ``C``'s assumptions, are at least as tight.
    """
    check_external_dims(Cprime.assumptions, C.assumptions)
    env = simulates(C.assumptions, Cprime.assumptions)
    guar = simulates(compose(C.assumptions, Cprime.guarantees), C.guarantees)
    return RefinementVerdict(env.holds and guar.holds, env, guar)


def saturate(C: Contract) -> Contract:
    """Replace the guarantees by ``assumptions ∘ guarantees``; implementations are unchanged."""
    name = f"sat({C.name})" if C.name else None
    return Contract(C.assumptions, compose(C.assumptions, C.guarantees), name)
