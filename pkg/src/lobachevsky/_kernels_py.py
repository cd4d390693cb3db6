"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""

import math


def mdot(u, v):
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    acc = -u[0] * v[0]
    for i in range(1, len(u)):
        acc += u[i] * v[i]
    return acc


def hdist(u, v, r):
    """Hyperbolic distance via the chord form 2r*asinh(|u-v|_M / 2r)."""
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    dx = u[0] - v[0]
    q = -dx * dx
    for i in range(1, len(u)):
        dx = u[i] - v[i]
        q += dx * dx
    if q < 0.0:
        q = 0.0
    return 2.0 * r * math.asinh(math.sqrt(q) / (2.0 * r))


def chord_length(pts, r):
    """Sum of hyperbolic distances between consecutive rows of ``pts``."""
    rows = [list(map(float, row)) for row in pts]
    total = 0.0
    for a, b in zip(rows, rows[1:]):
        total += hdist(a, b, r)
    return total


def _side(normal, p, e_foot, e_perp, r, theta):
    c, s = math.cos(theta), math.sin(theta)
    x = [p[i] + r * (c * e_foot[i] + s * e_perp[i]) for i in range(len(p))]
    return mdot(normal, x)


def bisect_boundary(normal, p, e_foot, e_perp, r, lo, hi, tol, max_iter):
    """See ``_kernels.bisect_boundary``."""
    normal, p, e_foot, e_perp = (list(map(float, v)) for v in (normal, p, e_foot, e_perp))
    ref = mdot(normal, p)
    it = 0
    while hi - lo > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if _side(normal, p, e_foot, e_perp, r, mid) * ref < 0.0:
            lo = mid
        else:
            hi = mid
        it += 1
    return 0.5 * (lo + hi), it
