"""Simulation relations and the simulation preorder.

A subspace ``S`` of ``X1 x X2`` certifies that ``S1`` is simulated by ``S2``
when three inclusions hold (with ``A = diag(A1, A2)``, ``G = diag(G1, G2)``
and ``V1*``, ``V2*`` the consistent subspaces):

* output:  ``S ⊆ ker [H1 0; 0 H2; C1 -C2]``
* state:   ``A S ⊆ S + im G``
* driving: ``(im G1 ∩ V1*) x {0} ⊆ S + {0} x (im G2 ∩ V2*)``

It is *full* when its projection on ``X1`` is all of ``V1*``. The first two
conditions already force both projections into the consistent subspaces.
The largest subspace meeting the output and state conditions is computed by
the invariant subspace iteration; since the driving condition and fullness
are monotone in ``S``, testing them on that largest subspace decides the
preorder exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .composition import check_external_dims, compose
from .errors import DimensionMismatch
from .subspace import (
    Matrix,
    Subspace,
    apply,
    contains,
    equals,
    image,
    intersect,
    kernel,
    permute,
    product,
    project,
)
from .system import DVSystem, consistent_subspace, largest_invariant_subspace

__all__ = [
    "FailureReason",
    "SimulationRelation",
    "SimulationVerdict",
    "check_relation",
    "largest_simulation_relation",
    "simulates",
    "transitive_witness",
    "composition_upper_witness",
    "infimum_witness",
    "diagonal_relation",
]


class FailureReason(str, enum.Enum):
    STATE = "StateCondition"
    DRIVING = "DrivingCondition"
    OUTPUT = "OutputCondition"
    NOT_FULL = "NotFull"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SimulationRelation:
    left_dim: int
    right_dim: int
    relation: Subspace

    def __post_init__(self):
        if self.relation.ambient_dim != self.left_dim + self.right_dim:
            raise DimensionMismatch(
                "relation ambient dimension", self.left_dim + self.right_dim,
                self.relation.ambient_dim,
            )

    @property
    def dim(self) -> int:
        return self.relation.dim

    def left_projection(self) -> Subspace:
        return project(self.relation, range(self.left_dim))

    def right_projection(self) -> Subspace:
        return project(self.relation, range(self.left_dim, self.left_dim + self.right_dim))

    def __contains__(self, pair) -> bool:
        x1, x2 = pair
        return tuple(x1) + tuple(x2) in self.relation

    def is_contained_in(self, other: SimulationRelation) -> bool:
        return contains(other.relation, self.relation)


@dataclass(frozen=True)
class SimulationVerdict:
    """Outcome of a simulation check.

    ``holds`` is true exactly when ``witness`` is a full simulation relation.
    ``is_relation`` records whether the witness met the output, state and
    driving conditions, so a relation that is valid but not full can be told
    apart from one that is not a simulation relation at all.
    """

    holds: bool
    witness: SimulationRelation | None
    failure_reason: FailureReason | None = None
    is_relation: bool = False

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        return "HOLDS" if self.holds else f"FAILS({self.failure_reason})"


def _pair_data(S1: DVSystem, S2: DVSystem):
    check_external_dims(S1, S2)
    A = Matrix.block_diag(S1.A, S2.A)
    G = Matrix.block_diag(S1.G, S2.G)
    K = kernel(Matrix.vstack(Matrix.block_diag(S1.H, S2.H), Matrix.hstack(S1.C, -S2.C)))
    return A, G, K


def _driving_inclusion(S: Subspace, S1: DVSystem, S2: DVSystem) -> bool:
    n1, n2 = S1.n, S2.n
    moves1 = intersect(image(S1.G), consistent_subspace(S1))
    moves2 = intersect(image(S2.G), consistent_subspace(S2))
    lhs = product(moves1, Subspace.zero(n2))
    rhs = S + product(Subspace.zero(n1), moves2)
    return contains(rhs, lhs)


def check_relation(rel: SimulationRelation, S1: DVSystem, S2: DVSystem) -> SimulationVerdict:
    """Check ``rel`` as a full simulation relation of ``S1`` by ``S2``.

    Conditions are tested in the order output, state, driving, fullness and
    the first violation is reported.
    """
    if (rel.left_dim, rel.right_dim) != (S1.n, S2.n):
        raise DimensionMismatch("relation block sizes", (S1.n, S2.n), (rel.left_dim, rel.right_dim))
    A, G, K = _pair_data(S1, S2)
    S = rel.relation
    if not contains(K, S):
        return SimulationVerdict(False, rel, FailureReason.OUTPUT)
    if not contains(S + image(G), apply(A, S)):
        return SimulationVerdict(False, rel, FailureReason.STATE)
    if not _driving_inclusion(S, S1, S2):
        return SimulationVerdict(False, rel, FailureReason.DRIVING)
    if not equals(rel.left_projection(), consistent_subspace(S1)):
        return SimulationVerdict(False, rel, FailureReason.NOT_FULL, is_relation=True)
    return SimulationVerdict(True, rel, None, is_relation=True)


def largest_simulation_relation(S1: DVSystem, S2: DVSystem) -> SimulationRelation:
    """Largest subspace meeting the output and state conditions."""
    A, G, K = _pair_data(S1, S2)
    return SimulationRelation(S1.n, S2.n, largest_invariant_subspace(A, G, K))


def simulates(S1: DVSystem, S2: DVSystem) -> SimulationVerdict:
    """Decide whether ``S1`` is simulated by ``S2``."""
    return check_relation(largest_simulation_relation(S1, S2), S1, S2)


def diagonal_relation(V: Subspace) -> SimulationRelation:
    """``{(x, x) | x in V}``."""
    n = V.ambient_dim
    return SimulationRelation(n, n, Subspace(2 * n, (v + v for v in V.vectors)))


def transitive_witness(S12: SimulationRelation, S23: SimulationRelation) -> SimulationRelation:
    """Relational composition ``{(x1, x3) | ∃ x2: (x1,x2) ∈ S12, (x2,x3) ∈ S23}``."""
    if S12.right_dim != S23.left_dim:
        raise DimensionMismatch("middle state dimension", S12.right_dim, S23.left_dim)
    n1, n2, n3 = S12.left_dim, S12.right_dim, S23.right_dim
    lifted12 = product(S12.relation, Subspace.full(n3))
    lifted23 = product(Subspace.full(n1), S23.relation)
    both = intersect(lifted12, lifted23)
    keep = list(range(n1)) + list(range(n1 + n2, n1 + n2 + n3))
    return SimulationRelation(n1, n3, project(both, keep))


def composition_upper_witness(S1: DVSystem, S2: DVSystem, side: int) -> SimulationRelation:
    """Relation certifying ``S1 ∘ S2`` is simulated by ``S1`` (side 1) or ``S2``.

    It pairs each consistent state ``(x1, x2)`` of the composition with the
    copy of its ``side`` component.
    """
    if side not in (1, 2):
        raise ValueError(f"side must be 1 or 2, got {side!r}")
    Vc = consistent_subspace(compose(S1, S2))
    n1 = S1.n
    part = slice(0, n1) if side == 1 else slice(n1, n1 + S2.n)
    right = S1.n if side == 1 else S2.n
    vecs = (v + v[part] for v in Vc.vectors)
    return SimulationRelation(n1 + S2.n, right, Subspace(n1 + S2.n + right, vecs))


def infimum_witness(Sa: SimulationRelation, Sb: SimulationRelation) -> SimulationRelation:
    """``{(x, (x1, x2)) | (x, x1) ∈ Sa, (x, x2) ∈ Sb}``.

    Given full relations of a system by ``S1`` and by ``S2``, this is a full
    relation of the same system by ``S1 ∘ S2``.
    """
    if Sa.left_dim != Sb.left_dim:
        raise DimensionMismatch("shared left dimension", Sa.left_dim, Sb.left_dim)
    n, n1, n2 = Sa.left_dim, Sa.right_dim, Sb.right_dim
    lifted_a = product(Sa.relation, Subspace.full(n2))
    # Sb x X1 has coordinates (x, x2, x1); move x1 before x2
    order = list(range(n)) + list(range(n + n2, n + n2 + n1)) + list(range(n, n + n2))
    lifted_b = permute(product(Sb.relation, Subspace.full(n1)), order)
    return SimulationRelation(n, n1 + n2, intersect(lifted_a, lifted_b))
