"""Random small systems for property checks.

Entries are integers drawn uniformly from ``{-2, ..., 2}``: small enough to
keep exact arithmetic quick, and degenerate ranks show up often. The
``relax`` / ``restrict`` helpers build systems that, in theory, simulate (or
are simulated by) a given one. Callers are expected to confirm such premises
with the checker rather than trusting the construction.
"""

from __future__ import annotations

import random

from .composition import compose
from .subspace import Matrix
from .system import DVSystem

ENTRIES = (-2, -1, 0, 1, 2)


def random_matrix(rng: random.Random, nrows: int, ncols: int) -> Matrix:
    return Matrix([[rng.choice(ENTRIES) for _ in range(ncols)] for _ in range(nrows)], ncols)


def _constraint_count(rng: random.Random, n: int) -> int:
    q = 0
    while q < n and rng.random() < 0.5:
        q += 1
    return q


def random_system(
    rng: random.Random,
    p: int,
    n: int | None = None,
    max_n: int = 3,
    max_m: int = 2,
    no_driving: bool = False,
) -> DVSystem:
    """A random system with ``p`` external variables.

    Constraint rows are appended one at a time with probability 1/2 each.
    """
    n = rng.randint(1, max_n) if n is None else n
    m = 0 if no_driving else rng.randint(0, max_m)
    q = _constraint_count(rng, n)
    return DVSystem(
        random_matrix(rng, n, n),
        random_matrix(rng, n, m),
        random_matrix(rng, p, n),
        random_matrix(rng, q, n),
    )


def random_unimodular(rng: random.Random, n: int, steps: int = 4) -> tuple[Matrix, Matrix]:
    """An integer matrix with integer inverse, built from elementary row operations."""
    T = [[int(i == j) for j in range(n)] for i in range(n)]
    Tinv = [row[:] for row in T]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        f = rng.choice((-1, 1))
        # row_i += f row_j on T; column_j -= f column_i on T^{-1}
        T[i] = [a + f * b for a, b in zip(T[i], T[j])]
        for row in Tinv:
            row[j] -= f * row[i]
    return Matrix(T), Matrix(Tinv)


def change_coordinates(sys: DVSystem, T: Matrix, Tinv: Matrix) -> DVSystem:
    """The same behaviour expressed in the state ``z = T x``."""
    return DVSystem(T @ sys.A @ Tinv, T @ sys.G, sys.C @ Tinv, sys.H @ Tinv)


def relax(sys: DVSystem, rng: random.Random, augment: bool = True) -> DVSystem:
    """A system expected to simulate ``sys``.

    Applies a random mix of: dropping constraint rows, adding driving
    columns, an unimodular change of coordinates, and appending a free
    unobserved state.
    """
    n = sys.n
    H = sys.H
    if H.nrows and rng.random() < 0.5:
        keep = [r for r in H.rows if rng.random() < 0.5]
        H = Matrix(keep, n)
    G = sys.G
    if rng.random() < 0.5:
        G = Matrix.hstack(G, random_matrix(rng, n, rng.randint(1, 2)))
    out = DVSystem(sys.A, G, sys.C, H)
    if rng.random() < 0.5:
        out = change_coordinates(out, *random_unimodular(rng, n))
    if augment and rng.random() < 0.3:
        out = append_free_state(out, rng)
    return out


def append_free_state(sys: DVSystem, rng: random.Random) -> DVSystem:
    """Append one state that is driven freely and invisible in ``w`` and ``H``."""
    n = sys.n
    A = Matrix.vstack(
        Matrix.hstack(sys.A, Matrix.zeros(n, 1)),
        random_matrix(rng, 1, n + 1),
    )
    G = Matrix.block_diag(sys.G, Matrix.identity(1))
    C = Matrix.hstack(sys.C, Matrix.zeros(sys.p, 1))
    H = Matrix.hstack(sys.H, Matrix.zeros(sys.q, 1))
    return DVSystem(A, G, C, H)


def universal_system(p: int) -> DVSystem:
    """``w' = d`` with no constraint: simulates every system with ``p`` outputs."""
    eye = Matrix.identity(p)
    return DVSystem(Matrix.zeros(p, p), eye, eye, Matrix((), p))


def restrict(sys: DVSystem, rng: random.Random, max_rows: int = 2) -> DVSystem:
    """A system expected to be simulated by ``sys``.

    Appends random constraint rows, sometimes after composing with a random
    partner system.
    """
    out = sys
    if rng.random() < 0.3:
        out = compose(out, random_system(rng, sys.p, max_n=2))
    extra = random_matrix(rng, rng.randint(1, max_rows), out.n)
    return out.with_constraints(extra)


def compatible_environment(assumptions: DVSystem, rng: random.Random) -> DVSystem:
    """An environment expected to be simulated by ``assumptions``.

    Adds one internal state with stable dynamics (``z' = -a z + r x``, ``a``
    in 1..2), invisible in the external variable, then appends random
    constraint rows over the enlarged state.
    """
    n, p = assumptions.n, assumptions.p
    a = rng.randint(1, 2)
    A = Matrix.vstack(
        Matrix.hstack(assumptions.A, Matrix.zeros(n, 1)),
        Matrix.hstack(random_matrix(rng, 1, n), Matrix([[-a]])),
    )
    G = Matrix.vstack(assumptions.G, Matrix.zeros(1, assumptions.m))
    C = Matrix.hstack(assumptions.C, Matrix.zeros(p, 1))
    H = Matrix.hstack(assumptions.H, Matrix.zeros(assumptions.q, 1))
    H = Matrix.vstack(H, random_matrix(rng, rng.randint(0, 2), n + 1))
    return DVSystem(A, G, C, H)
