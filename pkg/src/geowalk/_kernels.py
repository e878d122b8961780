"""Pure-Python ellipsoid chord kernels (fallback for ``_ckernels``).

Both implementations share the signature and status codes below; the
wrapper in :mod:`geowalk.oracle` turns non-zero status codes into exceptions.
"""
from __future__ import annotations

import math

import numpy as np

OK = 0
RAY_EXITS = 1
CURVATURE_VIOLATED = 2
DEGENERATE_LANDING = 3


def _inside(inv_a2, p) -> bool:
    return float(np.dot(p * p, inv_a2)) <= 1.0


def ellipsoid_exit(inv_a2, origin, direction, t_in, t_out, tol):
    """Bisect for the exit parameter of the ray ``origin + t * direction``.

    Returns ``(t, calls, status)`` where ``t`` is the inside end of the final
    bracket and ``calls`` counts membership evaluations.
    """
    calls = 1
    if not _inside(inv_a2, origin + t_in * direction):
        return 0.0, calls, RAY_EXITS
    calls += 1
    if _inside(inv_a2, origin + t_out * direction):
        return 0.0, calls, CURVATURE_VIOLATED
    lo, hi = t_in, t_out
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        calls += 1
        if _inside(inv_a2, origin + mid * direction):
            lo = mid
        else:
            hi = mid
    return lo, calls, OK


def _inward_normal(inv_a2, x):
    g = -x * inv_a2
    return g / math.sqrt(float(np.dot(g, g)))


def ellipsoid_chord(inv_a2, x, v, theta, max_chord, eps_frac, hi_factor, tol_frac, degenerate):
    """One chord step from ``(x, v)`` at angle ``theta`` to the tangent plane.

    Returns ``(x_star, v_star, delta, calls, status)``.
    """
    inv_a2 = np.asarray(inv_a2, dtype=float)
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    n = _inward_normal(inv_a2, x)
    line = math.cos(theta) * v + math.sin(theta) * n
    line = line / math.sqrt(float(np.dot(line, line)))
    t, calls, status = ellipsoid_exit(
        inv_a2, x, line, eps_frac * max_chord, hi_factor * max_chord, tol_frac * max_chord)
    if status != OK:
        return x, v, 0.0, calls, status
    x_star = x + t * line
    step = x_star - x
    delta = math.sqrt(float(np.dot(step, step)))
    n1 = _inward_normal(inv_a2, x_star)
    w = line - float(np.dot(line, n1)) * n1
    wn = math.sqrt(float(np.dot(w, w)))
    if wn < degenerate:
        return x_star, v, delta, calls, DEGENERATE_LANDING
    return x_star, w / wn, delta, calls, OK
