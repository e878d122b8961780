"""Empirical checks: Wasserstein distance between samples, moment tests, contraction.

The sphere contraction reference is computed by quadrature over the angle
between the random velocity and the geodesic joining the two chains, without
using any of the walk code it is compared against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from .errors import ContractViolation, InsufficientSamples
from .geometry import sample_unit_tangent
from .manifolds import SphereModel, UnitTangent
from .walk import ChainTrace

MAX_ASSIGNMENT_SIZE = 1024
MIN_UNIFORMITY_SAMPLES = 100
COALESCED = 1e-12

Metric = Union[SphereModel, str, Callable[[np.ndarray, np.ndarray], np.ndarray]]


def cost_matrix(a, b, metric: Metric = "geodesic") -> np.ndarray:
    """Pairwise distances between rows of ``a`` and ``b``.

    ``metric`` is a :class:`SphereModel` (great-circle distance), ``"geodesic"``
    (great-circle distance on the sphere through the first point of ``a``),
    ``"chord"`` (Euclidean), or a callable returning the matrix.  For convex
    bodies without exact distances the chord metric under-estimates the surface
    distance by at most a factor 2 pi sqrt(M2/m2).
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if isinstance(metric, SphereModel):
        return metric.pairwise_distance(a, b)
    if metric == "geodesic":
        radius = float(np.linalg.norm(a[0]))
        return SphereModel(radius, a.shape[1] - 1).pairwise_distance(a, b)
    if metric == "chord":
        return cdist(a, b)
    if callable(metric):
        return np.asarray(metric(a, b), dtype=float)
    raise ContractViolation(f"unknown metric {metric!r}")


def wasserstein1(a, b, metric: Metric = "geodesic") -> float:
    """W1 distance between two equal-size empirical measures (exact assignment)."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if len(a) != len(b):
        raise ContractViolation(f"sample counts differ: {len(a)} vs {len(b)}")
    if len(a) > MAX_ASSIGNMENT_SIZE:
        raise ContractViolation(f"at most {MAX_ASSIGNMENT_SIZE} samples per set")
    cost = cost_matrix(a, b, metric)
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum() / len(a))


@dataclass(frozen=True)
class UniformityReport:
    mean_norm: float
    second_moment_max_dev: float
    n: int

    def passes(self, mean_tol: float = 0.03, moment_tol: float = 0.03) -> bool:
        return self.mean_norm <= mean_tol and self.second_moment_max_dev <= moment_tol

    def to_dict(self) -> dict:
        return {"mean_norm": self.mean_norm, "second_moment_max_dev": self.second_moment_max_dev, "n": self.n}


def uniformity_stats(samples, m: SphereModel) -> UniformityReport:
    """Norm of the sample mean and max deviation of E[x x^T] from r^2 I/(d+1)."""
    x = np.atleast_2d(np.asarray(samples, dtype=float))
    n, dim = x.shape
    if n < MIN_UNIFORMITY_SAMPLES:
        raise InsufficientSamples(f"need at least {MIN_UNIFORMITY_SAMPLES} samples, got {n}")
    moment = x.T @ x / n
    target = m.radius ** 2 * np.eye(dim) / dim
    return UniformityReport(
        mean_norm=float(np.linalg.norm(x.mean(axis=0))),
        second_moment_max_dev=float(np.abs(moment - target).max()),
        n=n,
    )


@dataclass(frozen=True)
class ContractionProfile:
    ratios: np.ndarray
    distances: np.ndarray
    coalesced: np.ndarray

    def __len__(self) -> int:
        return len(self.ratios)


def contraction_profile(pair: tuple[ChainTrace, ChainTrace], m: SphereModel) -> ContractionProfile:
    """Per-step ratios ``dist(X_{i+1}, Y_{i+1}) / dist(X_i, Y_i)``.

    Steps starting from coalesced chains (distance below 1e-12) report ratio 1.
    """
    xs, ys = pair[0].points, pair[1].points
    if xs.shape != ys.shape:
        raise ContractViolation("coupled traces differ in length")
    dist = np.array([m.distance(p, q) for p, q in zip(xs, ys)])
    before, after = dist[:-1], dist[1:]
    coalesced = before < COALESCED
    ratios = np.ones_like(before)
    np.divide(after, before, out=ratios, where=~coalesced)
    return ContractionProfile(ratios, dist, coalesced)


def sphere_coupled_ratio(psi, d0: float, T: float):
    """One-step distance ratio on the unit 2-sphere for velocity angle ``psi``.

    Chains start at distance ``d0``; ``psi`` is the angle between the first
    chain's velocity and the geodesic towards the second.  By spherical
    trigonometry the new points have inner product
    ``cos^2 T cos d0 + sin^2 T (cos^2 psi cos d0 + sin^2 psi)``.
    """
    psi = np.asarray(psi, dtype=float)
    c = (math.cos(T) ** 2 * math.cos(d0)
         + math.sin(T) ** 2 * (np.cos(psi) ** 2 * math.cos(d0) + np.sin(psi) ** 2))
    return np.arccos(np.clip(c, -1.0, 1.0)) / d0


def one_step_sphere_contraction_reference(d0: float, T: float, nodes: int = 1 << 14) -> float:
    """Mean one-step coupled distance ratio on the unit 2-sphere.

    Trapezoidal rule over the full period of ``psi``; the integrand is smooth
    and periodic, so the rule converges geometrically.  The half-grid estimate
    bounds the error.
    """
    if not 0.0 < d0 < math.pi:
        raise ContractViolation("d0 must lie in (0, pi)")
    if not 0.0 < T <= math.pi / 2:
        raise ContractViolation("T must lie in (0, pi/2]")
    nodes = max(int(nodes), 10_000)
    psi = 2.0 * math.pi * np.arange(nodes) / nodes
    vals = sphere_coupled_ratio(psi, d0, T)
    full = float(vals.mean())
    half = float(vals[::2].mean())
    if abs(full - half) > 1e-6:
        raise ArithmeticError(f"quadrature did not converge (|full - half| = {abs(full - half):.2e})")
    return full


def one_step_contraction_samples(m: SphereModel, x, y, T: float, n: int, rng, direction=None) -> np.ndarray:
    """Ratios of ``n`` independent one-step couplings from the fixed pair ``(x, y)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d0 = m.distance(x, y)
    out = np.empty(n)
    nx = m.normal(x)
    for k in range(n):
        u = sample_unit_tangent(rng, nx) if direction is None else direction(x, rng)
        v = m.transport(u, x, y)
        x1 = m.geodesic(UnitTangent(x, u), T).point
        y1 = m.geodesic(UnitTangent(y, v), T).point
        out[k] = m.distance(x1, y1) / d0
    return out
