"""Build the optional compiled kernels.

If Cython or a C compiler is missing the package installs without them and
falls back to the numpy implementation at import time.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernels not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc}); using numpy fallback")


def extensions():
    if os.environ.get("PHASEKICK_NO_EXTENSION"):
        return []
    try:
        from Cython.Build import cythonize
        import numpy  # noqa: F401
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension(
        "phasekick._kernels",
        ["src/phasekick/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
    try:
        return cythonize([ext], compiler_directives={"language_level": "3"})
    except Exception as exc:  # noqa: BLE001
        print(f"warning: cythonize failed ({exc}); using numpy fallback")
        return []


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
