"""Build the optional Cython kernels.

The package works without them: ``catq._backend`` falls back to the
pure-Python implementation when ``catq._kernels`` cannot be imported.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("CATQ_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "catq._kernels",
                    ["src/catq/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
