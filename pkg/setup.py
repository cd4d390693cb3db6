"""Builds the optional compiled kernels; the package falls back to pure Python without them."""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("LOBACHEVSKY_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # no Cython: ship the pure-Python kernels only
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("lobachevsky._kernels", ["src/lobachevsky/_kernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
