"""Linear systems in driving-variable form.

A system is given by four maps::

    x' = A x + G d      (state x, driving variable d)
    w  = C x            (external variable w)
    0  = H x            (algebraic constraint)

The set of initial states from which some driving input keeps ``H x = 0``
for all time is the consistent subspace; it is computed here by the
decreasing invariant-subspace iteration.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import DimensionMismatch
from .subspace import Matrix, Subspace, image, intersect, kernel, preimage, to_fraction

__all__ = [
    "DVSystem",
    "validate",
    "invariant_subspace_iterates",
    "largest_invariant_subspace",
    "consistent_subspace",
    "is_consistent_state",
    "max_iterations",
]

MAX_ITER_ENV = "CONTRACTKIT_MAX_ITER"


def _as_matrix(value, width_if_empty: int | None = None) -> Matrix:
    if isinstance(value, Matrix):
        return value
    rows = [list(r) for r in value]
    if not rows:
        if width_if_empty is None:
            raise ValueError("cannot infer the width of an empty matrix")
        return Matrix((), width_if_empty)
    if all(len(r) == 0 for r in rows):
        return Matrix(rows, 0)
    return Matrix(rows)


@dataclass(frozen=True)
class DVSystem:
    """The quadruple ``(A, G, C, H)``.

    ``G`` may have zero columns (no driving variable) and ``H`` zero rows (no
    constraint). Plain nested lists are accepted and converted; an empty
    list for ``H`` means no constraint rows.
    """

    A: Matrix
    G: Matrix
    C: Matrix
    H: Matrix
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        A = _as_matrix(self.A)
        n = A.nrows
        G = self.G
        if not isinstance(G, Matrix) and len(G) == 0:
            G = Matrix(((),) * n, 0)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "G", _as_matrix(G))
        object.__setattr__(self, "C", _as_matrix(self.C, n))
        object.__setattr__(self, "H", _as_matrix(self.H, n))
        validate(self)

    @classmethod
    def build(cls, A, G=None, C=None, H=None, name=None) -> DVSystem:
        """Convenience constructor: missing ``G`` means no driving input, missing
        ``C`` the identity output, missing ``H`` no constraints."""
        A = _as_matrix(A)
        n = A.nrows
        G = Matrix(((),) * n, 0) if G is None else G
        C = Matrix.identity(n) if C is None else C
        H = Matrix((), n) if H is None else H
        return cls(A, G, C, H, name)

    @property
    def n(self) -> int:
        """State dimension."""
        return self.A.nrows

    @property
    def m(self) -> int:
        """Driving dimension."""
        return self.G.ncols

    @property
    def p(self) -> int:
        """External dimension."""
        return self.C.nrows

    @property
    def q(self) -> int:
        """Number of constraint rows."""
        return self.H.nrows

    def with_name(self, name: str | None) -> DVSystem:
        return DVSystem(self.A, self.G, self.C, self.H, name)

    def with_constraints(self, rows) -> DVSystem:
        """Copy with extra rows appended to ``H``."""
        extra = rows if isinstance(rows, Matrix) else Matrix(rows, self.n)
        return DVSystem(self.A, self.G, self.C, Matrix.vstack(self.H, extra), self.name)


def validate(sys: DVSystem) -> None:
    """Raise :class:`DimensionMismatch` unless all dimension couplings hold."""
    n = sys.A.nrows
    if sys.A.ncols != n:
        raise DimensionMismatch("A must be square (rows vs cols)", n, sys.A.ncols)
    if sys.G.nrows != n:
        raise DimensionMismatch("rows of G vs state dimension", n, sys.G.nrows)
    if sys.C.ncols != n:
        raise DimensionMismatch("columns of C vs state dimension", n, sys.C.ncols)
    if sys.H.ncols != n:
        raise DimensionMismatch("columns of H vs state dimension", n, sys.H.ncols)


def max_iterations(n: int) -> int:
    """Iteration cap for an ``n``-dimensional fixed point.

    The iteration drops dimension at every non-final step, so ``n + 1`` passes
    always suffice; the environment variable only exists for diagnostics.
    """
    override = os.environ.get(MAX_ITER_ENV)
    if override:
        return int(override)
    return n + 1


def invariant_subspace_iterates(A: Matrix, G: Matrix, K: Subspace) -> list[Subspace]:
    """All iterates of ``V0 = K, V_{k+1} = V_k ∩ A^{-1}(V_k + im G)``.

    The last element is the fixed point: the largest ``V ⊆ K`` with
    ``A V ⊆ V + im G``.
    """
    im_g = image(G)
    iterates = [K]
    cap = max_iterations(K.ambient_dim)
    for _ in range(cap):
        V = iterates[-1]
        nxt = intersect(V, preimage(A, V + im_g))
        if nxt.dim == V.dim:
            return iterates
        iterates.append(nxt)
    raise RuntimeError(f"invariant subspace iteration did not settle in {cap} steps")


def largest_invariant_subspace(A: Matrix, G: Matrix, K: Subspace) -> Subspace:
    return invariant_subspace_iterates(A, G, K)[-1]


@lru_cache(maxsize=4096)
def consistent_subspace(sys: DVSystem) -> Subspace:
    """Largest ``V ⊆ ker H`` with ``A V ⊆ V + im G``."""
    return largest_invariant_subspace(sys.A, sys.G, kernel(sys.H))


def is_consistent_state(sys: DVSystem, x0: Sequence) -> bool:
    if len(x0) != sys.n:
        raise DimensionMismatch("initial state length", sys.n, len(x0))
    return [to_fraction(x) for x in x0] in consistent_subspace(sys)
