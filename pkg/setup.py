"""Build script: compiles the optional Cython kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so any failure here downgrades to a warning instead of aborting
the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/tancat/_kernel/_poly_cy.pyx",
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    print(f"warning: skipping Cython kernel build ({exc}); "
          "falling back to the pure-Python kernel", file=sys.stderr)

setup(ext_modules=ext_modules)
