"""Build the optional compiled counting kernel; the package works without it."""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("DELPEZZO_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("delpezzo.vectorfields._kernel", ["src/delpezzo/vectorfields/_kernel.pyx"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
