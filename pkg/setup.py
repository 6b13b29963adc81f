"""Build script: compiles the scoring kernel extension when Cython is available.

Installation falls back to the pure-Python kernel if the extension cannot
be built; the package selects the implementation at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/poseguide/_kernels/_fast.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
