# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Must stay numerically equivalent to ``_kernels_py``."""

from libc.math cimport asinh, sqrt, cos, sin


cdef inline double _mdot(const double[:] u, const double[:] v) nogil:
    cdef Py_ssize_t i
    cdef double acc = -u[0] * v[0]
    for i in range(1, u.shape[0]):
        acc += u[i] * v[i]
    return acc


def mdot(const double[:] u, const double[:] v):
    if u.shape[0] != v.shape[0]:
        raise ValueError("dimension mismatch")
    return _mdot(u, v)


def hdist(const double[:] u, const double[:] v, double r):
    """Hyperbolic distance via the chord form 2r*asinh(|u-v|_M / 2r)."""
    cdef Py_ssize_t i, n = u.shape[0]
    cdef double dx, q
    if v.shape[0] != n:
        raise ValueError("dimension mismatch")
    dx = u[0] - v[0]
    q = -dx * dx
    for i in range(1, n):
        dx = u[i] - v[i]
        q += dx * dx
    if q < 0.0:
        q = 0.0
    return 2.0 * r * asinh(sqrt(q) / (2.0 * r))


def chord_length(const double[:, :] pts, double r):
    """Sum of hyperbolic distances between consecutive rows of ``pts``."""
    cdef Py_ssize_t k, i, m = pts.shape[0], n = pts.shape[1]
    cdef double total = 0.0, dx, q
    with nogil:
        for k in range(1, m):
            dx = pts[k, 0] - pts[k - 1, 0]
            q = -dx * dx
            for i in range(1, n):
                dx = pts[k, i] - pts[k - 1, i]
                q += dx * dx
            if q < 0.0:
                q = 0.0
            total += 2.0 * r * asinh(sqrt(q) / (2.0 * r))
    return total


cdef inline double _side(const double[:] normal, const double[:] p,
                         const double[:] e_foot, const double[:] e_perp,
                         double r, double theta) nogil:
    cdef Py_ssize_t i
    cdef double c = cos(theta), s = sin(theta), x
    x = p[0] + r * (c * e_foot[0] + s * e_perp[0])
    cdef double acc = -normal[0] * x
    for i in range(1, p.shape[0]):
        x = p[i] + r * (c * e_foot[i] + s * e_perp[i])
        acc += normal[i] * x
    return acc


def bisect_boundary(const double[:] normal, const double[:] p,
                    const double[:] e_foot, const double[:] e_perp,
                    double r, double lo, double hi, double tol, int max_iter):
    """Bisect the ray angle separating rays that cross the line from those that do not.

    A ray from ``p`` at angle theta (measured from ``e_foot`` toward ``e_perp``)
    crosses the line iff its ideal endpoint lies strictly on the far side of the
    line's plane, i.e. <normal, endpoint> has the opposite sign of <normal, p>.
    """
    cdef double ref = _mdot(normal, p)
    cdef double mid
    cdef int it = 0
    with nogil:
        while hi - lo > tol and it < max_iter:
            mid = 0.5 * (lo + hi)
            if _side(normal, p, e_foot, e_perp, r, mid) * ref < 0.0:
                lo = mid
            else:
                hi = mid
            it += 1
    return 0.5 * (lo + hi), it
