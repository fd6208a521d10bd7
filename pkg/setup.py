"""Build the optional Cython kernels.

If Cython or a C compiler is missing the package still installs and
falls back to the numpy kernels in ``slicequat._kernels_py``.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SLICEQUAT_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "slicequat._kernels_cy",
                    ["src/slicequat/_kernels_cy.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
