"""The geodesic walk, its chord-approximated variant, and the transport coupling."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ContractViolation
from .geometry import sample_unit_tangent
from .integrator import make_integrator
from .manifolds import SphereModel, UnitTangent
from .rng import RngStream


@dataclass
class WalkConfig:
    """Parameters of one chain.

    ``theta == 0`` selects the exact integrator where the model has one.
    ``stream_id`` picks the RNG stream, so chains sharing a seed stay independent.
    """

    T: float
    N: int
    theta: float = 0.0
    seed: int = 0
    burn_in: int = 0
    stream_id: int = 0

    def validate(self, bounds=None) -> "WalkConfig":
        if self.N < 1:
            raise ContractViolation("N must be >= 1")
        if self.burn_in < 0 or self.theta < 0:
            raise ContractViolation("burn_in and theta must be non-negative")
        if bounds is not None and not 0.0 < self.T <= bounds.t_max * (1.0 + 1e-12):
            raise ContractViolation(
                f"T must lie in (0, pi/(2 sqrt(M2))] = (0, {bounds.t_max:.6g}], got {self.T!r}")
        return self


@dataclass
class ChainTrace:
    """Points X_1..X_N, the velocities U_1..U_{N-1}, and oracle calls per step."""

    points: np.ndarray
    velocities: np.ndarray
    star_calls_per_step: np.ndarray
    burn_in: int = 0
    distances: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def samples(self) -> np.ndarray:
        """Points after burn-in."""
        return self.points[self.burn_in:]

    @property
    def total_star_calls(self) -> int:
        return int(self.star_calls_per_step.sum())


DirectionFn = Callable[[np.ndarray, RngStream], np.ndarray]


def walk_step(integrator, state, T: float, rng: RngStream, direction: Optional[DirectionFn] = None):
    """One transition: draw a uniform unit tangent at ``state`` and integrate for time ``T``.

    Returns ``(next_point, UnitTangent(state, u), star_calls)``.
    """
    state = np.asarray(state, dtype=float)
    if direction is None:
        u = sample_unit_tangent(rng, integrator.manifold.normal(state))
    else:
        u = direction(state, rng)
    s = UnitTangent(state, u)
    if T == 0:
        return state.copy(), s, 0
    res = integrator(s, T)
    return res.endpoint, s, res.star_calls


def run_walk(manifold, integrator, config: WalkConfig, start=None) -> ChainTrace:
    """Run ``config.N - 1`` transitions from ``start`` (default: the model's start point)."""
    config.validate(manifold.bounds)
    if integrator is None:
        integrator = make_integrator(manifold, config.theta)
    rng = RngStream(config.seed, config.stream_id)
    x = np.asarray(manifold.start_point() if start is None else start, dtype=float)
    dim = x.size
    points = np.empty((config.N, dim))
    velocities = np.empty((config.N - 1, dim))
    calls = np.zeros(config.N - 1, dtype=np.int64)
    points[0] = x
    for i in range(config.N - 1):
        x, s, c = walk_step(integrator, x, config.T, rng)
        points[i + 1] = x
        velocities[i] = s.direction
        calls[i] = c
    return ChainTrace(points, velocities, calls, burn_in=config.burn_in)


def run_coupled(m: SphereModel, x, y, T: float, N: int, rng: RngStream,
                direction: Optional[DirectionFn] = None) -> tuple[ChainTrace, ChainTrace]:
    """Two walks whose velocities are coupled by parallel transport.

    The second chain uses ``V_i = transport(U_i; X_i, Y_i)``.  Each chain's
    trace carries the per-step distances ``dist(X_i, Y_i)`` in ``distances``.
    """
    if N < 1:
        raise ContractViolation("N must be >= 1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dim = x.size
    xs, ys = np.empty((N, dim)), np.empty((N, dim))
    us, vs = np.empty((N - 1, dim)), np.empty((N - 1, dim))
    dist = np.empty(N)
    xs[0], ys[0] = x, y
    dist[0] = m.distance(x, y)
    for i in range(N - 1):
        u = sample_unit_tangent(rng, m.normal(x)) if direction is None else direction(x, rng)
        v = m.transport(u, x, y)
        x = m.geodesic(UnitTangent(x, u), T).point
        y = m.geodesic(UnitTangent(y, v), T).point
        xs[i + 1], ys[i + 1] = x, y
        us[i], vs[i] = u, v
        dist[i + 1] = m.distance(x, y)
    zeros = np.zeros(N - 1, dtype=np.int64)
    return (ChainTrace(xs, us, zeros, distances=dist),
            ChainTrace(ys, vs, zeros.copy(), distances=dist))
