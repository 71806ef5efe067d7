"""Build script: compiles the optional kernel extension when Cython and a C
compiler are available; the package falls back to pure Python otherwise.

    python setup.py build_ext --inplace
"""

import sys

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/curlflux/_kernels/_core.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    print("Cython not available; installing with pure-Python kernels",
          file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
