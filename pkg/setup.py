"""Build script: compiles the optional Cython kernel for the BdG integrator.

The package works without the extension (a vectorized numpy twin is selected
at import time), so any build failure here downgrades to a warning instead of
aborting the install.
"""

import sys

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = cythonize(
        [
            Extension(
                "floqxy._bdg_cy",
                ["src/floqxy/_bdg_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"warning: Cython kernel not built ({exc}); using numpy fallback", file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
