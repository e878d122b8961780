"""Chord-step oracle for boundaries of convex bodies.

A chord leaves the current boundary point at angle ``theta`` to the tangent
plane (its tangential part parallel to the current velocity), crosses the
body, and lands on the boundary again.  The landing point, the tangent
projection of the chord direction there, and the chord length form one
approximate geodesic step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _backend
from ._kernels import CURVATURE_VIOLATED, DEGENERATE_LANDING, RAY_EXITS
from .errors import (ContractViolation, CurvatureBoundViolated, DegenerateLanding,
                     RayExitsImmediately, ThetaTooLarge)
from .manifolds import ConvexBodyModel, UnitTangent

# All lengths are relative to the largest possible chord 2/sqrt(m2).
ENTRY_FRAC = 1e-8       # first probe inside the body
OUTSIDE_FACTOR = 1.01   # bracket end beyond the circumscribed sphere
TOL_FRAC = 1e-10        # bisection tolerance
DEGENERATE_NORM = 1e-8  # tangent projection of the chord at landing


@dataclass(frozen=True, eq=False)
class StarStep:
    x_star: np.ndarray
    v_star: np.ndarray
    delta_star: float
    oracle_calls: int

    @property
    def state(self) -> UnitTangent:
        return UnitTangent(self.x_star, self.v_star)


class RayHit(NamedTuple):
    point: np.ndarray
    length: float
    calls: int


def bisection_tolerance(body: ConvexBodyModel) -> float:
    return TOL_FRAC * body.bounds.max_chord


def max_oracle_calls() -> int:
    """Upper bound on membership calls made by one :func:`intersect_ray`."""
    return 2 + math.ceil(math.log2(1.0 / TOL_FRAC))


def _raise_status(status: int) -> None:
    if status == RAY_EXITS:
        raise RayExitsImmediately("chord direction does not enter the body")
    if status == CURVATURE_VIOLATED:
        raise CurvatureBoundViolated(
            "body extends beyond 2.02/sqrt(m2) along the chord; the lower curvature bound m2 is too large")
    if status == DEGENERATE_LANDING:
        raise DegenerateLanding("chord lands (almost) along the surface normal")


def intersect_ray(body: ConvexBodyModel, origin, direction) -> RayHit:
    """Exit point of the ray from boundary point ``origin`` along ``direction``.

    The exit is bracketed between a point just inside the body and a point
    beyond the circumscribed tangent sphere, then bisected on membership.  The
    reported point is the inside end of the final bracket.
    """
    origin = np.asarray(origin, dtype=float)
    direction = np.asarray(direction, dtype=float)
    lmax = body.bounds.max_chord
    lo, hi = ENTRY_FRAC * lmax, OUTSIDE_FACTOR * lmax
    tol = TOL_FRAC * lmax
    if body.ellipsoid_axes is not None:
        t, calls, status = _backend.kernels.ellipsoid_exit(
            1.0 / body.ellipsoid_axes ** 2, origin, direction, lo, hi, tol)
        _raise_status(status)
    else:
        calls = 1
        if not body.membership(origin + lo * direction):
            _raise_status(RAY_EXITS)
        calls += 1
        if body.membership(origin + hi * direction):
            _raise_status(CURVATURE_VIOLATED)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            calls += 1
            if body.membership(origin + mid * direction):
                lo = mid
            else:
                hi = mid
        t = lo
    q = origin + t * direction
    return RayHit(q, float(np.linalg.norm(q - origin)), int(calls))


def boundary_along_ray(body: ConvexBodyModel, inside, direction) -> np.ndarray:
    """Boundary point on the ray from an interior point (bisection on membership)."""
    inside = np.asarray(inside, dtype=float)
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    lo, hi = 0.0, 2.0 * body.bounds.max_chord
    if body.membership(inside + hi * direction):
        raise CurvatureBoundViolated("body is larger than its curvature bounds allow")
    tol = TOL_FRAC * body.bounds.max_chord
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if body.membership(inside + mid * direction):
            lo = mid
        else:
            hi = mid
    return inside + lo * direction


def chord_step(body: ConvexBodyModel, s: UnitTangent, theta: float, check: bool = True) -> StarStep:
    """One chord step at angle ``theta`` from phase-space point ``s``.

    With ``check`` set, raises :class:`ThetaTooLarge` when the accuracy
    precondition ``beta * sqrt(M2) * theta * delta < 1`` fails after the step.
    """
    if not 0.0 < theta < math.pi / 2:
        raise ContractViolation(f"theta must lie in (0, pi/2), got {theta!r}")
    bounds = body.bounds
    if body.ellipsoid_axes is not None:
        x_star, v_star, delta, calls, status = _backend.kernels.ellipsoid_chord(
            1.0 / body.ellipsoid_axes ** 2, s.point, s.direction, float(theta),
            bounds.max_chord, ENTRY_FRAC, OUTSIDE_FACTOR, TOL_FRAC, DEGENERATE_NORM)
        _raise_status(status)
    else:
        n = body.normal(s.point)
        line = math.cos(theta) * s.direction + math.sin(theta) * n
        line /= np.linalg.norm(line)
        x_star, delta, calls = intersect_ray(body, s.point, line)
        n1 = body.normal(x_star)
        w = line - np.dot(line, n1) * n1
        wn = np.linalg.norm(w)
        if wn < DEGENERATE_NORM:
            _raise_status(DEGENERATE_LANDING)
        v_star = w / wn
    if check and bounds.beta * math.sqrt(bounds.M2) * theta * delta >= 1.0:
        raise ThetaTooLarge(
            f"theta={theta:.4g} gives beta*sqrt(M2)*theta*delta="
            f"{bounds.beta * math.sqrt(bounds.M2) * theta * delta:.3g} >= 1; reduce theta")
    return StarStep(np.asarray(x_star), np.asarray(v_star), float(delta), int(calls))


def chord_length_bounds(bounds, theta: float) -> tuple[float, float]:
    """Chord lengths of the inscribed and circumscribed tangent spheres."""
    return 2.0 * math.sin(theta) / math.sqrt(bounds.M2), 2.0 * math.sin(theta) / math.sqrt(bounds.m2)
