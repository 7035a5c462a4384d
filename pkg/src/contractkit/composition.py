"""Interconnection of two systems by sharing their external variable."""

from __future__ import annotations

from fractions import Fraction

from .errors import ExternalDimMismatch
from .subspace import Matrix, Subspace
from .system import DVSystem, consistent_subspace

__all__ = ["compose", "composed_consistent_subspace", "check_external_dims"]

HALF = Fraction(1, 2)


def check_external_dims(*systems: DVSystem) -> int:
    p = systems[0].p
    for s in systems[1:]:
        if s.p != p:
            raise ExternalDimMismatch("external dimension", p, s.p)
    return p


def _label(s: DVSystem, fallback: str) -> str:
    return s.name if s.name else fallback


def compose(S1: DVSystem, S2: DVSystem) -> DVSystem:
    """Variable-sharing composition ``S1 ∘ S2``.

    The state is ``(x1, x2)`` and the driving variable ``(d1, d2)``. The
    shared external value is reported as ``(C1 x1 + C2 x2) / 2``; the extra
    constraint rows ``C1 x1 - C2 x2 = 0`` make both halves agree.
    """
    check_external_dims(S1, S2)
    A = Matrix.block_diag(S1.A, S2.A)
    G = Matrix.block_diag(S1.G, S2.G)
    C = Matrix.hstack(S1.C, S2.C) * HALF
    H = Matrix.vstack(
        Matrix.block_diag(S1.H, S2.H),
        Matrix.hstack(S1.C, -S2.C),
    )
    name = f"({_label(S1, 'S1')}∘{_label(S2, 'S2')})"
    return DVSystem(A, G, C, H, name)


def composed_consistent_subspace(S1: DVSystem, S2: DVSystem) -> Subspace:
    return consistent_subspace(compose(S1, S2))
