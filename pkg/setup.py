"""Build script: compiles the optional Cython kernel when Cython is available.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so any build failure here is non-fatal.  Set
DDFEN_SKIP_EXT=1 to force a pure-Python install.
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("DDFEN_SKIP_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("ddfen._dcca_cy", ["src/ddfen/_dcca_cy.pyx"])
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions())
