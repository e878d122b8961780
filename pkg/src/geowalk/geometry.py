"""Ambient linear algebra on tangent planes of hypersurfaces in R^(d+1)."""
from __future__ import annotations

import numpy as np

from .errors import ContractViolation
from .rng import RngStream

UNIT_TOL = 1e-12
ORTHO_TOL = 1e-10
REDRAW_NORM = 1e-8


def as_vector(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise ContractViolation(f"expected a vector in R^(d+1) with d >= 1, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ContractViolation("vector has non-finite entries")
    return w


def _check_unit(n: np.ndarray, name: str = "n", tol: float = UNIT_TOL) -> None:
    if abs(np.linalg.norm(n) - 1.0) > tol:
        raise ContractViolation(f"{name} must be a unit vector (norm={np.linalg.norm(n)!r})")


def project_to_tangent(w, n) -> np.ndarray:
    """Remove the component of ``w`` along the unit normal ``n``."""
    w = as_vector(w)
    n = as_vector(n)
    _check_unit(n)
    return w - np.dot(w, n) * n


def sample_unit_tangent(rng: RngStream, n) -> np.ndarray:
    """Uniform draw from the unit sphere of the hyperplane orthogonal to ``n``.

    An isotropic Gaussian in the ambient space is projected onto the tangent
    hyperplane and normalized. The projected Gaussian is isotropic inside the
    hyperplane, so its direction is uniform there.
    """
    n = as_vector(n)
    _check_unit(n)
    while True:
        g = rng.normal(n.size)
        t = g - np.dot(g, n) * n
        norm = np.linalg.norm(t)
        if norm >= REDRAW_NORM:
            return t / norm


def rotate_in_plane(w, a, b, angle: float) -> np.ndarray:
    """Rotate the span(a, b) component of ``w`` by ``angle`` (a towards b)."""
    w = as_vector(w)
    a = as_vector(a)
    b = as_vector(b)
    if (abs(np.linalg.norm(a) - 1.0) > ORTHO_TOL or abs(np.linalg.norm(b) - 1.0) > ORTHO_TOL
            or abs(np.dot(a, b)) > ORTHO_TOL):
        raise ContractViolation("rotation plane needs an orthonormal pair (a, b)")
    ca = np.dot(w, a)
    cb = np.dot(w, b)
    c, s = np.cos(angle), np.sin(angle)
    rest = w - ca * a - cb * b
    return rest + (c * ca - s * cb) * a + (s * ca + c * cb) * b
