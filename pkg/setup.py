"""Build script: compiles the optional fast kernels when Cython + a C compiler exist.

The package is fully functional without the extension; `d0res.kernels` falls back
to the pure-Python twin at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/d0res/_kernhot.pyx"],
        language_level="3",
        compiler_directives={"boundscheck": False, "wraparound": False},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"d0res: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
