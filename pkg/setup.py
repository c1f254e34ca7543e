"""Build script for the optional compiled evaluation kernel.

The package is fully functional without the extension: the semantics
engine falls back to a pure-Python kernel at import time.  Building the
extension just makes the bounded oracle considerably faster.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the kernel if possible, otherwise continue without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: compiled kernel skipped ({exc}); "
                  "falling back to the pure-Python evaluator")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure-Python evaluator")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/ltlkit/semantics/_ckernel.pyx"],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
