"""Build hook for the optional compiled gate kernel.

The package is fully functional without compilation (a numpy fallback is
selected at import time); when Cython and a C compiler are available the
extension `fsimring._kernels` is built for faster inner loops.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/fsimring/_kernels.pyx"],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
except Exception as exc:  # pragma: no cover - depends on build environment
    print(f"fsimring: building without compiled kernel ({exc!r})")

setup(ext_modules=ext_modules)
