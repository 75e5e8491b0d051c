"""Build script for the optional compiled kernels.

The package works without the extension: ``coherence_lab._kernels`` falls
back to the numpy implementation when the compiled module is missing, so
the extension is marked optional and a failed compile only downgrades
performance.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "coherence_lab._kernels._speedups",
                ["src/coherence_lab/_kernels/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
