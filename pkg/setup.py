"""Build script: compiles the optional edit-distance extension when Cython
and a C toolchain are available. The package works without it (pure-Python
fallback selected at import time by mlsmells.textsim)."""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mlsmells/_kernels/_editdist.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
