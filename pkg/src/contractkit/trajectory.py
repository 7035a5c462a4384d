"""Fixed-step RK4 integration of driven linear systems.

This is the floating-point side of the package: it reproduces the
vehicle-following experiment and gives sampled evidence for verdicts that the
exact modules decide.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch
from .system import consistent_subspace

__all__ = [
    "Piece",
    "DrivingSignal",
    "Trajectory",
    "VehicleParams",
    "ExperimentResult",
    "vehicle_closed_loop",
    "integrate",
    "spacing_error",
    "run_vehicle_experiment",
    "csv_text",
    "ShadowResult",
    "shadow_simulation",
    "DEFAULT_DT",
    "DEFAULT_T_END",
]

DEFAULT_DT = 0.001
DEFAULT_T_END = 15.0


@dataclass(frozen=True)
class Piece:
    """``constant`` from ``start`` on, plus ``sin(t - start)`` when ``sine`` is set."""

    start: float
    constant: float
    sine: bool = False

    def value(self, t: float) -> float:
        if self.sine:
            return self.constant + math.sin(t - self.start)
        return self.constant


@dataclass(frozen=True)
class DrivingSignal:
    """Piecewise scalar signal; each piece holds on ``[start, next start)``."""

    pieces: tuple[Piece, ...]

    def __post_init__(self):
        if not self.pieces or self.pieces[0].start != 0:
            raise ValueError("the first piece must start at t = 0")
        starts = [p.start for p in self.pieces]
        if starts != sorted(starts) or len(set(starts)) != len(starts):
            raise ValueError(f"piece start times must increase strictly, got {starts}")

    @classmethod
    def constant(cls, c: float) -> DrivingSignal:
        return cls((Piece(0.0, c),))

    @classmethod
    def step_then_sine(cls, switch: float = 5.0, level: float = 1.0) -> DrivingSignal:
        """``level`` on ``[0, switch)``, then ``level + sin(t - switch)``."""
        return cls((Piece(0.0, level), Piece(switch, level, sine=True)))

    def __call__(self, t: float) -> float:
        current = self.pieces[0]
        for p in self.pieces[1:]:
            if t < p.start:
                break
            current = p
        return current.value(t)


@dataclass(frozen=True)
class VehicleParams:
    """Headway time ``h`` [s], controller gain ``k`` [1/s], lead-vehicle drag ``c`` [1/s]."""

    h: float = 1.0
    k: float = 0.25
    c: float = 0.5

    def __post_init__(self):
        for name in ("h", "k", "c"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"vehicle parameter {name} must be positive, got {v}")


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), n)
    dt: float

    def __len__(self) -> int:
        return len(self.times)


def vehicle_closed_loop(params: VehicleParams) -> tuple[np.ndarray, np.ndarray]:
    """State matrix and disturbance column for the lead vehicle plus controlled follower.

    State order is ``(s1, v1, s2, v2)``; the disturbance enters ``v1'`` only.
    """
    h, k, c = params.h, params.k, params.c
    A = np.array([
        [0.0, 1.0, 0.0, 0.0],
        [0.0, -c, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [k / h, 1.0 / h, -k / h, -k - 1.0 / h],
    ])
    inject = np.array([0.0, 1.0, 0.0, 0.0])
    return A, inject


def _grid_steps(dt: float, t_end: float) -> int:
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_end < 0:
        raise ValueError(f"t_end must be nonnegative, got {t_end}")
    steps = round(t_end / dt)
    if not math.isclose(steps * dt, t_end, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError(f"t_end={t_end} is not a multiple of dt={dt}")
    return steps


def integrate(
    A,
    inject,
    d: Callable[[float], float | np.ndarray],
    x0: Sequence[float],
    dt: float,
    t_end: float,
) -> Trajectory:
    """Classical RK4 for ``x' = A x + inject d(t)`` on a uniform grid.

    ``inject`` is a column (length ``n``) for a scalar signal or an ``n x r``
    matrix when ``d`` returns length-``r`` vectors.

    Because the system is linear and time invariant, one RK4 step is a fixed
    linear map of ``x`` and the three input samples ``d(t)``, ``d(t + dt/2)``
    and ``d(t + dt)``. Those maps are assembled once, so the loop only does a
    matrix-vector product per step.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(inject, dtype=float)
    x = np.asarray(x0, dtype=float).copy()
    n = A.shape[0]
    if A.ndim != 2 or A.shape != (n, n):
        raise DimensionMismatch("A must be square", (n, n), A.shape)
    if B.shape[0] != n:
        raise DimensionMismatch("rows of injection", n, B.shape[0])
    if x.shape != (n,):
        raise DimensionMismatch("initial state length", n, x.shape)
    steps = _grid_steps(dt, t_end)
    if B.ndim == 1:
        B = B[:, None]

    # RK4 stages written for a batch of states X and input terms U0, Uh, U1
    def step(X, U0, Uh, U1):
        k1 = A @ X + U0
        k2 = A @ (X + dt / 2 * k1) + Uh
        k3 = A @ (X + dt / 2 * k2) + Uh
        k4 = A @ (X + dt * k3) + U1
        return X + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    eye, zero = np.eye(n), np.zeros((n, n))
    state_map = step(eye, zero, zero, zero)
    from_start = step(zero, eye, zero, zero) @ B
    from_mid = step(zero, zero, eye, zero) @ B
    from_end = step(zero, zero, zero, eye) @ B

    times = np.arange(steps + 1) * dt
    r = B.shape[1]
    samples = np.array([np.atleast_1d(d(t)) for t in times], dtype=float).reshape(steps + 1, r)
    mids = np.array([np.atleast_1d(d(t + dt / 2)) for t in times[:-1]], dtype=float).reshape(steps, r)
    forcing = samples[:-1] @ from_start.T + mids @ from_mid.T + samples[1:] @ from_end.T

    states = np.empty((steps + 1, n))
    states[0] = x
    for i in range(steps):
        x = state_map @ x + forcing[i]
        states[i + 1] = x
    return Trajectory(times, states, dt)


def spacing_error(traj: Trajectory, h: float) -> np.ndarray:
    """``e = -s1 + s2 + h v2`` at every sample; zero exactly on the spacing policy."""
    if traj.states.shape[1] != 4:
        raise DimensionMismatch("state dimension for the vehicle pair", 4, traj.states.shape[1])
    s1, _, s2, v2 = traj.states.T
    return -s1 + s2 + h * v2


@dataclass
class ExperimentResult:
    trajectory: Trajectory
    error: np.ndarray

    def rows(self) -> list[tuple[float, float, float, float]]:
        """``(t, v1, v2, e)`` per grid point."""
        st = self.trajectory.states
        return list(zip(self.trajectory.times, st[:, 1], st[:, 3], self.error))


def run_vehicle_experiment(
    params: VehicleParams = VehicleParams(),
    x0: Sequence[float] = (1.0, 2.0, 0.0, 1.0),
    profile: DrivingSignal | None = None,
    dt: float = DEFAULT_DT,
    t_end: float = DEFAULT_T_END,
) -> ExperimentResult:
    profile = DrivingSignal.step_then_sine() if profile is None else profile
    A, inject = vehicle_closed_loop(params)
    traj = integrate(A, inject, profile, x0, dt, t_end)
    return ExperimentResult(traj, spacing_error(traj, params.h))


def _fmt(x: float) -> str:
    s = f"{x:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def csv_text(result: ExperimentResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "v1", "v2", "e"])
    for row in result.rows():
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _orth(M: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if M.size == 0:
        return np.zeros((M.shape[0], 0))
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    return u[:, : int((s > tol * max(1.0, s[0] if s.size else 0)).sum())]


def _null(M: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    n = M.shape[1]
    if M.shape[0] == 0 or n == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(M)
    rank = int((s > tol * max(1.0, s[0])).sum())
    return vt[rank:].T


def _floats(M) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in M.rows], dtype=float).reshape(M.shape)


@dataclass
class ShadowResult:
    trajectory: Trajectory
    output_gap: float      # max |C1 x1 - C2 x2| over the grid
    relation_gap: float    # max distance of (x1, x2) from the relation
    scale: float           # max |state| over the grid


def shadow_simulation(S1, S2, relation, rng: np.random.Generator,
                      dt: float = 1e-3, t_end: float = 1.0,
                      hold: float = 0.25) -> ShadowResult:
    """Drive ``S1`` inside its consistent subspace and let ``S2`` follow along ``relation``.

    ``S1`` gets a random piecewise-constant input restricted to moves that
    keep it consistent. ``S2``'s driving input is solved pointwise, by least
    squares, so that the derivative of the pair stays in the relation. The
    joint system is linear and integrated with :func:`integrate`.
    """
    A1, G1, C1 = _floats(S1.A), _floats(S1.G), _floats(S1.C)
    A2, G2, C2 = _floats(S2.A), _floats(S2.G), _floats(S2.C)
    n1, n2 = S1.n, S2.n
    V1 = _orth(_floats(consistent_subspace(S1).basis))
    P1 = np.eye(n1) - V1 @ V1.T
    # feedback keeping x1 in V1*, and the free driving directions that stay there
    F1 = -np.linalg.pinv(P1 @ G1, rcond=1e-10) @ P1 @ A1 @ V1 @ V1.T if G1.size else np.zeros((0, n1))
    N1 = _null(P1 @ G1) if G1.size else np.zeros((0, 0))
    M1 = A1 + G1 @ F1 if G1.size else A1
    R1 = G1 @ N1 if G1.size else np.zeros((n1, 0))

    Srel = _orth(_floats(relation.relation.basis))
    Ps = np.eye(n1 + n2) - Srel @ Srel.T
    lift_g2 = np.vstack([np.zeros((n1, S2.m)), G2])
    K = -np.linalg.pinv(Ps @ lift_g2, rcond=1e-10) @ Ps if S2.m else np.zeros((0, n1 + n2))
    drift = np.block([[M1, np.zeros((n1, n2))], [np.zeros((n2, n1)), A2]])
    free = np.vstack([R1, np.zeros((n2, R1.shape[1]))])
    A_joint = drift + lift_g2 @ K @ drift
    B_joint = free + lift_g2 @ K @ free

    r = R1.shape[1]
    knots = np.arange(0.0, t_end + hold, hold)
    values = rng.uniform(-1.0, 1.0, size=(len(knots), r))

    def d(t):
        i = min(int(t // hold), len(knots) - 1)
        return values[i]

    coeffs = rng.uniform(-1.0, 1.0, size=Srel.shape[1])
    z0 = Srel @ coeffs
    inject = B_joint if r else np.zeros((n1 + n2, 1))
    signal = d if r else (lambda t: 0.0)
    traj = integrate(A_joint, inject, signal, z0, dt, t_end)
    x1, x2 = traj.states[:, :n1], traj.states[:, n1:]
    gap = np.abs(x1 @ C1.T - x2 @ C2.T).max() if S1.p else 0.0
    rel_gap = np.abs(traj.states @ Ps.T).max()
    return ShadowResult(traj, float(gap), float(rel_gap), float(np.abs(traj.states).max()))
