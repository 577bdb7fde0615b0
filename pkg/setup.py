"""Build script: compiles the Cython propagation kernels when possible.

The package works without the extension (a numpy fallback is selected at
import time), so an environment without Cython or a C compiler can still
`pip install` from a source tree that ships the generated C file.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "qbsim._kernels._compiled",
                ["src/qbsim/_kernels/_compiled.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
