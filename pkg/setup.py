"""Build hook for the optional compiled kernel.

The package is pure Python plus one optional Cython extension
(`entropy_count._speedups`) holding the O(E^2) Wick pair sum.  If Cython
or a C compiler is missing the build falls through to the pure-NumPy
kernel selected at import time by `entropy_count.kernels`.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "entropy_count._speedups",
                ["src/entropy_count/_speedups.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off: no FMA contraction, so the compiled
                # kernel stays bit-stable and numerically comparable to
                # the pure path.
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
