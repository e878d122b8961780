"""Geodesic integrators: chained chord steps with a final adjustment, and exact great circles."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, FinalAdjustFailed
from .manifolds import ConvexBodyModel, SphereModel, UnitTangent, sphere_geodesic
from .oracle import ENTRY_FRAC, chord_step

MAX_ADJUST_ITERATIONS = 200


@dataclass(frozen=True, eq=False)
class IntegratorResult:
    endpoint: np.ndarray
    end_velocity: np.ndarray
    star_calls: int
    steps: int
    elapsed: float = 0.0

    @property
    def state(self) -> UnitTangent:
        return UnitTangent(self.endpoint, self.end_velocity)


def _check_time(bounds, T: float) -> None:
    if not 0.0 < T <= bounds.t_max * (1.0 + 1e-12):
        raise ContractViolation(f"integration time must lie in (0, pi/(2 sqrt(M2))] = (0, {bounds.t_max:.6g}], got {T!r}")


def approx_geodesic(body: ConvexBodyModel, s: UnitTangent, T: float, theta: float) -> IntegratorResult:
    """Approximate ``gamma_s(T)`` by chord steps at angle ``theta``.

    Full chords are committed while the accumulated chord length stays within
    ``T``; a chord that would overshoot is discarded.  The remaining time
    ``delta`` is then covered by one chord whose angle is found by bisection
    so that its length lies in ``[delta - theta/sqrt(M2), delta]``.
    """
    _check_time(body.bounds, T)
    if not 0.0 < theta < math.pi / 2:
        raise ContractViolation(f"theta must lie in (0, pi/2), got {theta!r}")
    sqrt_M2 = math.sqrt(body.bounds.M2)
    state = s
    elapsed = 0.0
    calls = steps = 0
    while True:
        step = chord_step(body, state, theta)
        calls += 1
        if elapsed + step.delta_star > T:
            break
        elapsed += step.delta_star
        state = step.state
        steps += 1

    remaining = T - elapsed
    # Chords shorter than the entry probe cannot be resolved by the ray
    # bisection; such a remainder is treated as an exact landing.
    if remaining > 2.0 * ENTRY_FRAC * body.bounds.max_chord:
        lower = remaining - theta / sqrt_M2
        lo, hi = 0.0, theta
        for _ in range(MAX_ADJUST_ITERATIONS):
            mid = 0.5 * (lo + hi)
            step = chord_step(body, state, mid)
            calls += 1
            if step.delta_star > remaining:
                hi = mid
            elif step.delta_star < lower:
                lo = mid
            else:
                break
        else:
            raise FinalAdjustFailed(
                f"no chord angle gave a length in [{lower:.3g}, {remaining:.3g}] "
                f"after {MAX_ADJUST_ITERATIONS} bisections")
        elapsed += step.delta_star
        state = step.state
        steps += 1
    return IntegratorResult(state.point, state.direction, calls, steps, elapsed)


def exact_geodesic(m: SphereModel, s: UnitTangent, T: float) -> IntegratorResult:
    """Closed-form great-circle integrator; makes no oracle calls."""
    end = sphere_geodesic(m, s, T)
    return IntegratorResult(end.point, end.direction, 0, 0 if T == 0 else 1, float(T))


class ExactIntegrator:
    """Integrator backed by a model's closed-form geodesics."""

    def __init__(self, manifold: SphereModel):
        if not getattr(manifold, "exact_geodesic", False):
            raise ContractViolation(f"{manifold!r} has no closed-form geodesics")
        self.manifold = manifold

    def __call__(self, s: UnitTangent, T: float) -> IntegratorResult:
        return exact_geodesic(self.manifold, s, T)

    def __repr__(self) -> str:
        return f"ExactIntegrator({self.manifold!r})"


class ChordIntegrator:
    """Integrator chaining chord steps of angle ``theta`` on a convex body."""

    def __init__(self, body: ConvexBodyModel, theta: float):
        if isinstance(body, SphereModel):
            body = body.as_convex_body()
        self.manifold = body
        self.theta = float(theta)

    def __call__(self, s: UnitTangent, T: float) -> IntegratorResult:
        return approx_geodesic(self.manifold, s, T, self.theta)

    def __repr__(self) -> str:
        return f"ChordIntegrator(theta={self.theta})"


def make_integrator(manifold, theta: float = 0.0):
    """Exact integrator when ``theta == 0`` and available, else chord steps."""
    if theta == 0.0:
        return ExactIntegrator(manifold)
    return ChordIntegrator(manifold, theta)
