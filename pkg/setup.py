import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; rsum falls back at import
    cythonize = None

# Summation results must be bit-reproducible: no fast-math, no FMA contraction.
FP_FLAGS = ["-O3", "-fno-fast-math", "-ffp-contract=off", "-fno-associative-math"]

ext_modules = []
if cythonize is not None and not os.environ.get("RSUM_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "rsum._ext.kernels",
                sources=["src/rsum/_ext/kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=FP_FLAGS,
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
            "embedsignature": True,
        },
    )

setup(ext_modules=ext_modules)
