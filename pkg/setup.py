"""Build script: compiles the optional Cython kernel extension.

The package is pure Python plus one optional extension module with the hot
inner loops (word substitution, weight refinement, ratio scans).  If Cython
or a C compiler is unavailable the build falls back to the pure-Python
kernels transparently; set BETADOUBLING_NO_EXT=1 to skip the extension on
purpose.

For in-place development builds:

    python setup.py build_ext --inplace
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("BETADOUBLING_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "betadoubling._ckernels",
                    ["src/betadoubling/_ckernels.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
