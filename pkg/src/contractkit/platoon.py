"""Exact models for the two-vehicle constant-headway example.

Every system here uses the external variable ``w = (s1, v1, s2, v2)``:
positions and velocities of the lead vehicle (1) and the follower (2).
"""

from __future__ import annotations

from fractions import Fraction

from .contracts import Contract
from .subspace import Matrix, to_fraction
from .system import DVSystem

__all__ = [
    "spacing_row",
    "guarantees",
    "assumptions",
    "follower",
    "constrained_follower",
    "lead_vehicle",
    "spacing_contract",
    "DEFAULT_H",
    "DEFAULT_K",
    "DEFAULT_C",
]

DEFAULT_H = Fraction(1)
DEFAULT_K = Fraction(1, 4)
DEFAULT_C = Fraction(1, 2)

I4 = Matrix.identity(4)
NO_CONSTRAINT = Matrix((), 4)


def spacing_row(h=DEFAULT_H) -> Matrix:
    """``e = -s1 + s2 + h v2`` as a 1x4 map; zero on the spacing policy."""
    return Matrix([[-1, 0, 1, to_fraction(h)]])


def guarantees(h=DEFAULT_H) -> DVSystem:
    """Free dynamics on ``w`` restricted to the spacing policy."""
    return DVSystem(I4, I4, I4, spacing_row(h), name="guarantees")


def assumptions() -> DVSystem:
    """Only the lead kinematics ``s1' = v1`` is assumed."""
    A = Matrix([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    G = Matrix([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    return DVSystem(A, G, I4, NO_CONSTRAINT, name="assumptions")


def follower(h=DEFAULT_H, k=DEFAULT_K) -> DVSystem:
    """Follower double integrator under the headway controller.

    The lead vehicle's position and velocity are left free (driven).
    """
    h, k = to_fraction(h), to_fraction(k)
    A = Matrix([
        [0, 0, 0, 0],
        [0, 0, 0, 0],
        [0, 0, 0, 1],
        [k / h, 1 / h, -k / h, -k - 1 / h],
    ])
    G = Matrix([[1, 0], [0, 1], [0, 0], [0, 0]])
    return DVSystem(A, G, I4, NO_CONSTRAINT, name="sigma")


def constrained_follower(h=DEFAULT_H, k=DEFAULT_K) -> DVSystem:
    """The follower restricted to initial states on the spacing policy."""
    return follower(h, k).with_constraints(spacing_row(h)).with_name("sigma_constrained")


def lead_vehicle(c=DEFAULT_C) -> DVSystem:
    """Lead vehicle with drag ``v1' = -c v1 + d1``; the follower states are free."""
    c = to_fraction(c)
    A = Matrix([[0, 1, 0, 0], [0, -c, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    G = Matrix([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    return DVSystem(A, G, I4, NO_CONSTRAINT, name="vehicle1")


def spacing_contract(h=DEFAULT_H) -> Contract:
    return Contract(assumptions(), guarantees(h), name="spacing")
