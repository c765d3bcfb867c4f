"""Build script for the optional compiled kernels.

The package works without the extension (a pure-Python twin is selected at
import time), so a missing compiler or Cython only costs speed.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "pamine._kernels._speedups",
        ["src/pamine/_kernels/_speedups.pyx"],
        # -ffp-contract=off keeps float ops bit-identical to the pure-Python
        # twin (no FMA fusion), which the backend equivalence tests rely on.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(ext_modules=cythonize(extensions, language_level="3") if cythonize else [])
