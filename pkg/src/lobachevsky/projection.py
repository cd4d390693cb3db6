"""Hyperboloid <-> Poincare and Beltrami-Klein disk (ball) coordinates."""

import numpy as np

from .minkowski import HPoint

KINDS = ("poincare", "klein")


def to_disk(p, kind="poincare"):
    """Planar (or ball) image of a point; coordinates are first scaled to r = 1."""
    x = (p.x if isinstance(p, HPoint) else np.asarray(p, dtype=float))
    r = p.r if isinstance(p, HPoint) else 1.0
    return to_disk_many(x[None, :] / r, kind)[0]


def to_disk_many(X, kind="poincare"):
    """Rows of unit-model hyperboloid coordinates -> disk coordinates."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if kind == "klein":
        return X[:, 1:] / X[:, :1]
    if kind == "poincare":
        return X[:, 1:] / (1.0 + X[:, :1])
    raise ValueError(f"unknown projection {kind!r}")


def from_disk(z, kind="poincare", r=1.0):
    z = np.asarray(z, dtype=float)
    s = float(z @ z)
    if s >= 1.0:
        raise ValueError("point outside the open unit disk")
    if kind == "klein":
        x = np.concatenate(([1.0], z)) / np.sqrt(1.0 - s)
    elif kind == "poincare":
        x = np.concatenate(([1.0 + s], 2.0 * z)) / (1.0 - s)
    else:
        raise ValueError(f"unknown projection {kind!r}")
    return HPoint(r * x, r)
