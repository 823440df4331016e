"""Builds the optional compiled statevector kernels.

If Cython or a C compiler is unavailable the install still succeeds;
qmci._kernels falls back to the pure-numpy implementation at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qmci._kernels._ckernels",
                sources=["src/qmci/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
