"""Build script; compiles the optional C extension for the hot kernels.

If Cython or a C compiler is unavailable the build falls back to a pure
Python install; the package then selects the numpy reference kernels at
import time.
"""
import os
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "melink._kernels._core",
                ["src/melink/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # strict IEEE arithmetic so results are bit-identical to the
                # numpy reference kernels (no FMA contraction, no reassociation)
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError as exc:
    sys.stderr.write(f"melink: building without compiled kernels ({exc})\n")


if ext_modules:
    from setuptools.command.build_ext import build_ext as _build_ext

    class optional_build_ext(_build_ext):  # noqa: N801
        """Carry on with the pure Python fallback if compilation fails."""

        def run(self):
            try:
                super().run()
            except Exception as exc:
                sys.stderr.write(f"melink: compiled kernels skipped ({exc})\n")

        def build_extension(self, ext):
            try:
                super().build_extension(ext)
            except Exception as exc:
                sys.stderr.write(
                    f"melink: failed to build {ext.name} ({exc}); "
                    "falling back to numpy kernels\n"
                )

    cmdclass = {"build_ext": optional_build_ext}
else:
    cmdclass = {}

setup(ext_modules=ext_modules, cmdclass=cmdclass)
