"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python fallback is
selected at import time); building it is strongly recommended for the
exhaustive enumeration and cycle-search workloads.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/spectrex/kernels/_fast.pyx"],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
