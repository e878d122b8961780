"""Manifold models: the round sphere and boundaries of smooth convex bodies.

Points and tangent vectors live in ambient coordinates of R^(d+1).  A model
advertises which exact operations it supports through the ``exact_geodesic``,
``exact_transport`` and ``exact_distance`` flags; the walk only asks for the
ones an experiment needs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ContractViolation, NonUniqueGeodesic
from .geometry import as_vector, rotate_in_plane

# Below this angle between x and y the transport is the identity; within this
# angle of pi the points are treated as antipodal.
COINCIDENT_ANGLE = 1e-15
ANTIPODAL_ANGLE = 1e-12


@dataclass(frozen=True)
class CurvatureBounds:
    """Lower/upper curvature bounds ``m2 <= C <= M2`` (units 1/length^2)."""

    m2: float
    M2: float

    def __post_init__(self):
        if not (0.0 < self.m2 <= self.M2 < math.inf):
            raise ContractViolation(f"need 0 < m2 <= M2 < inf, got m2={self.m2}, M2={self.M2}")

    @property
    def t_max(self) -> float:
        """Largest admissible integration time, pi / (2 sqrt(M2))."""
        return math.pi / (2.0 * math.sqrt(self.M2))

    @property
    def d_bound(self) -> float:
        """Diameter bound pi / sqrt(m2)."""
        return math.pi / math.sqrt(self.m2)

    @property
    def max_chord(self) -> float:
        """Diameter of the circumscribed tangent sphere, 2 / sqrt(m2)."""
        return 2.0 / math.sqrt(self.m2)

    @property
    def ratio(self) -> float:
        return self.M2 / self.m2

    @property
    def alpha(self) -> float:
        """Position-accuracy constant of the chord oracle, 2 pi M2/m2."""
        return 2.0 * math.pi * self.M2 / self.m2

    @property
    def beta(self) -> float:
        """Velocity-accuracy constant of the chord oracle, 5 sqrt(M2/m2)."""
        return 5.0 * math.sqrt(self.M2 / self.m2)


@dataclass(frozen=True, eq=False)
class UnitTangent:
    """A point of phase space: a surface point with a unit tangent direction."""

    point: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", as_vector(self.point))
        object.__setattr__(self, "direction", as_vector(self.direction))
        if self.point.shape != self.direction.shape:
            raise ContractViolation("point and direction dimensions differ")

    def check(self, manifold, unit_tol: float = 1e-9, tangent_tol: float = 1e-8) -> "UnitTangent":
        if abs(np.linalg.norm(self.direction) - 1.0) > unit_tol:
            raise ContractViolation("direction is not a unit vector")
        if abs(np.dot(self.direction, manifold.normal(self.point))) > tangent_tol:
            raise ContractViolation("direction is not tangent to the surface")
        return self


class SphereModel:
    """The round sphere S^d of radius ``radius`` centred at the origin of R^(d+1)."""

    exact_geodesic = True
    exact_transport = True
    exact_distance = True

    def __init__(self, radius: float = 1.0, dim: int = 2):
        if not radius > 0:
            raise ContractViolation("sphere radius must be positive")
        if int(dim) < 1:
            raise ContractViolation("sphere dimension must be >= 1")
        self.radius = float(radius)
        self.dim = int(dim)
        curv = 1.0 / self.radius ** 2
        self.bounds = CurvatureBounds(curv, curv)

    def __repr__(self) -> str:
        return f"SphereModel(radius={self.radius}, dim={self.dim})"

    @property
    def ambient_dim(self) -> int:
        return self.dim + 1

    def normal(self, x) -> np.ndarray:
        """Outward unit normal.  Orientation is irrelevant for tangent sampling."""
        x = np.asarray(x, dtype=float)
        return x / np.linalg.norm(x)

    def contains(self, x, rel_tol: float = 1e-9) -> bool:
        return abs(np.linalg.norm(x) - self.radius) <= rel_tol * self.radius

    def start_point(self) -> np.ndarray:
        x = np.zeros(self.ambient_dim)
        x[-1] = self.radius
        return x

    def geodesic(self, s: UnitTangent, t: float) -> UnitTangent:
        return sphere_geodesic(self, s, t)

    def distance(self, x, y) -> float:
        return sphere_distance(self, x, y)

    def transport(self, u, x, y) -> np.ndarray:
        return sphere_parallel_transport(self, u, x, y)

    def pairwise_distance(self, a, b) -> np.ndarray:
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.atleast_2d(np.asarray(b, dtype=float))
        a = a / np.linalg.norm(a, axis=1, keepdims=True)
        b = b / np.linalg.norm(b, axis=1, keepdims=True)
        # 2 atan2(|a - b|, |a + b|) stays accurate near 0 and pi, unlike arccos
        return 2.0 * self.radius * np.arctan2(cdist(a, b), cdist(a, -b))

    def sample_uniform(self, rng, size: int) -> np.ndarray:
        """Exact uniform draws (normalized Gaussians), used as a reference sampler."""
        g = rng.normal((size, self.ambient_dim))
        return self.radius * g / np.linalg.norm(g, axis=1, keepdims=True)

    def as_convex_body(self) -> "ConvexBodyModel":
        """The ball bounded by this sphere, for running the chord oracle on it."""
        return ellipsoid_model(np.full(self.ambient_dim, self.radius))


def sphere_geodesic(m: SphereModel, s: UnitTangent, t: float) -> UnitTangent:
    """Unit-speed great circle from ``s`` after time ``t``."""
    r = m.radius
    x, v = s.point, s.direction
    c, sn = math.cos(t / r), math.sin(t / r)
    return UnitTangent(c * x + r * sn * v, -(sn / r) * x + c * v)


def _unit_and_angle(m: SphereModel, x, y):
    p = as_vector(x) / m.radius
    q = as_vector(y) / m.radius
    cos_a = float(np.clip(np.dot(p, q), -1.0, 1.0))
    perp = q - cos_a * p
    sin_a = float(np.linalg.norm(perp))
    return p, perp, math.atan2(sin_a, cos_a), sin_a


def sphere_distance(m: SphereModel, x, y) -> float:
    """Great-circle distance ``r * angle(x, y)``."""
    _, _, angle, _ = _unit_and_angle(m, x, y)
    return m.radius * angle


def sphere_parallel_transport(m: SphereModel, u, x, y) -> np.ndarray:
    """Transport tangent vector ``u`` at ``x`` to ``y`` along the minimizing great circle."""
    u = as_vector(u)
    p, perp, angle, sin_a = _unit_and_angle(m, x, y)
    if angle < COINCIDENT_ANGLE:
        return u.copy()
    if math.pi - angle < ANTIPODAL_ANGLE:
        raise NonUniqueGeodesic("x and y are antipodal; the minimizing geodesic is not unique")
    e = perp / sin_a
    # Re-orthogonalize against rounding so rotate_in_plane accepts the pair.
    e = e - np.dot(e, p) * p
    e /= np.linalg.norm(e)
    return rotate_in_plane(u, p, e, angle)


@dataclass(frozen=True, eq=False)
class ConvexBodyModel:
    """Boundary of a convex body given by membership and inward-normal callbacks.

    ``ellipsoid_axes`` is set only by :func:`ellipsoid_model`; it lets the chord
    oracle use the compiled ellipsoid kernel instead of the callbacks.
    """

    membership: Callable[[np.ndarray], bool]
    inward_normal: Callable[[np.ndarray], np.ndarray]
    bounds: CurvatureBounds
    interior_point: np.ndarray
    membership_tol: float = 1e-10
    level_function: Optional[Callable[[np.ndarray], float]] = None
    ellipsoid_axes: Optional[np.ndarray] = field(default=None, repr=False)

    exact_geodesic = False
    exact_transport = False
    exact_distance = False

    def __post_init__(self):
        ip = as_vector(self.interior_point)
        object.__setattr__(self, "interior_point", ip)
        if not self.membership(ip):
            raise ContractViolation("interior_point is not inside the body")

    @property
    def ambient_dim(self) -> int:
        return self.interior_point.size

    @property
    def dim(self) -> int:
        return self.ambient_dim - 1

    def normal(self, x) -> np.ndarray:
        return np.asarray(self.inward_normal(np.asarray(x, dtype=float)), dtype=float)

    def contains(self, x, tol: Optional[float] = None) -> bool:
        """Whether ``x`` lies on the boundary (needs ``level_function``)."""
        if self.level_function is None:
            raise ContractViolation("body has no level function to test boundary membership")
        tol = self.membership_tol if tol is None else tol
        return abs(self.level_function(np.asarray(x, dtype=float)) - 1.0) <= tol

    def start_point(self) -> np.ndarray:
        """Boundary point hit by the ray from the interior point along +e_0."""
        from .oracle import boundary_along_ray

        e0 = np.zeros(self.ambient_dim)
        e0[0] = 1.0
        return boundary_along_ray(self, self.interior_point, e0)


def ellipsoid_model(semi_axes) -> ConvexBodyModel:
    """Axis-aligned ellipsoid sum(x_i^2 / a_i^2) <= 1.

    Normal curvatures of an ellipsoid range over [a_min / a_max^2, a_max / a_min^2],
    attained at axis endpoints, which gives the tangent-sphere radii bounds.
    """
    a = as_vector(semi_axes)
    if np.any(a <= 0):
        raise ContractViolation("semi-axes must be positive")
    inv_a2 = 1.0 / a ** 2
    a_min, a_max = float(a.min()), float(a.max())
    bounds = CurvatureBounds((a_min / a_max ** 2) ** 2, (a_max / a_min ** 2) ** 2)

    def level(x):
        return float(np.dot(x * x, inv_a2))

    def membership(x):
        return level(x) <= 1.0

    def inward_normal(x):
        g = -x * inv_a2
        return g / np.linalg.norm(g)

    return ConvexBodyModel(
        membership=membership,
        inward_normal=inward_normal,
        bounds=bounds,
        interior_point=np.zeros(a.size),
        membership_tol=1e-10,
        level_function=level,
        ellipsoid_axes=a.copy(),
    )
