# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled ellipsoid chord kernels; mirrors geowalk._kernels."""
import numpy as np
from libc.math cimport sqrt, sin, cos

cdef int OK = 0
cdef int RAY_EXITS = 1
cdef int CURVATURE_VIOLATED = 2
cdef int DEGENERATE_LANDING = 3


cdef inline bint _inside(const double[::1] inv_a2, const double[::1] o,
                         const double[::1] d, double t, Py_ssize_t n) noexcept nogil:
    cdef double acc = 0.0, p
    cdef Py_ssize_t i
    for i in range(n):
        p = o[i] + t * d[i]
        acc += p * p * inv_a2[i]
    return acc <= 1.0


cdef int _exit(const double[::1] inv_a2, const double[::1] o, const double[::1] d,
               double t_in, double t_out, double tol, double* t_res, long* calls) noexcept nogil:
    cdef Py_ssize_t n = inv_a2.shape[0]
    cdef double lo, hi, mid
    calls[0] = 1
    if not _inside(inv_a2, o, d, t_in, n):
        return RAY_EXITS
    calls[0] += 1
    if _inside(inv_a2, o, d, t_out, n):
        return CURVATURE_VIOLATED
    lo = t_in
    hi = t_out
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        calls[0] += 1
        if _inside(inv_a2, o, d, mid, n):
            lo = mid
        else:
            hi = mid
    t_res[0] = lo
    return OK


def ellipsoid_exit(inv_a2, origin, direction, double t_in, double t_out, double tol):
    cdef const double[::1] a = np.ascontiguousarray(inv_a2, dtype=np.float64)
    cdef const double[::1] o = np.ascontiguousarray(origin, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(direction, dtype=np.float64)
    cdef double t = 0.0
    cdef long calls = 0
    cdef int status
    with nogil:
        status = _exit(a, o, d, t_in, t_out, tol, &t, &calls)
    return t, calls, status


cdef void _normal(const double[::1] inv_a2, const double[::1] x, double[::1] out) noexcept nogil:
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double s = 0.0
    for i in range(n):
        out[i] = -x[i] * inv_a2[i]
        s += out[i] * out[i]
    s = sqrt(s)
    for i in range(n):
        out[i] /= s


def ellipsoid_chord(inv_a2, x, v, double theta, double max_chord, double eps_frac,
                    double hi_factor, double tol_frac, double degenerate):
    cdef const double[::1] a = np.ascontiguousarray(inv_a2, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t i, n = xv.shape[0]
    x_star_arr = np.empty(n)
    v_star_arr = np.empty(n)
    line_arr = np.empty(n)
    cdef double[::1] xs = x_star_arr
    cdef double[::1] vs = v_star_arr
    cdef double[::1] line = line_arr
    cdef double[::1] nrm = np.empty(n)
    cdef double c = cos(theta), s = sin(theta), norm, t = 0.0, delta, dot, step
    cdef long calls = 0
    cdef int status
    with nogil:
        _normal(a, xv, nrm)
        norm = 0.0
        for i in range(n):
            line[i] = c * vv[i] + s * nrm[i]
            norm += line[i] * line[i]
        norm = sqrt(norm)
        for i in range(n):
            line[i] /= norm
        status = _exit(a, xv, line, eps_frac * max_chord, hi_factor * max_chord,
                       tol_frac * max_chord, &t, &calls)
        if status == OK:
            delta = 0.0
            for i in range(n):
                xs[i] = xv[i] + t * line[i]
                step = xs[i] - xv[i]
                delta += step * step
            delta = sqrt(delta)
            _normal(a, xs, nrm)
            dot = 0.0
            for i in range(n):
                dot += line[i] * nrm[i]
            norm = 0.0
            for i in range(n):
                vs[i] = line[i] - dot * nrm[i]
                norm += vs[i] * vs[i]
            norm = sqrt(norm)
            if norm < degenerate:
                status = DEGENERATE_LANDING
            else:
                for i in range(n):
                    vs[i] /= norm
    if status == OK:
        return x_star_arr, v_star_arr, delta, calls, status
    if status == DEGENERATE_LANDING:
        return x_star_arr, np.asarray(v, dtype=float), delta, calls, status
    return np.asarray(x, dtype=float), np.asarray(v, dtype=float), 0.0, calls, status
