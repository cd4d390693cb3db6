"""Hyperbolic geometry on the hyperboloid model: parallels, horospheres, trigonometry, figures."""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
