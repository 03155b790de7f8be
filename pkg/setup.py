"""Build the optional compiled bit-stream kernels.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the NIST battery considerably faster
on multi-megabit streams.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    import numpy as np

    ext_modules = cythonize(
        [
            Extension(
                "qra._bitkernels",
                ["src/qra/_bitkernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
