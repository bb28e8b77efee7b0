"""Build script: compiles the solver kernels if Cython is available.

The kernel module is written in Cython pure-Python mode, so the package
still works (slowly) when the extension cannot be built -- the same source
file is then imported as plain Python.
"""
from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        ["src/puzzlegraph/_kernels/solvers.py"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "nonecheck": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
