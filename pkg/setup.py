"""Build script: compiles the optional fast kernel.

The package works without the extension (a pure-Python fallback with the
same API is selected at import time), so any failure here is non-fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/polyreg/_svkernel.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"fast kernel not built ({exc}); using pure-Python fallback")

setup(ext_modules=ext_modules)
