"""Build the optional compiled eigensolver kernels.

If Cython or a C compiler is unavailable the package still installs and the
numpy fallback in ``hofstadter_lab._kernels_py`` is used at import time.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HOFSTADTER_LAB_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "hofstadter_lab._kernels",
                    ["src/hofstadter_lab/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    # no -ffast-math: results must be bitwise reproducible
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
