"""Build script for the optional compiled Monte Carlo sweep kernel.

The package is fully functional without the extension (a pure-numpy
fallback is selected at import time); building it just makes ensemble
sweeps roughly an order of magnitude faster.  See benchmarks/bench_mc.py.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "rydsim.mc._sweep_cy",
                ["src/rydsim/mc/_sweep_cy.pyx"],
                include_dirs=[numpy.get_include()],
                # keep C arithmetic bit-compatible with the numpy fallback
                extra_compile_args=["-O2", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
