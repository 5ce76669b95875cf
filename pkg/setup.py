"""Build script.

The metric kernel ships as an optional Cython extension.  If the toolchain
(or Cython itself) is unavailable, the build proceeds without it and the
pure-Python twin is selected at import time.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, otherwise continue without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing, etc.
            print(f"warning: compiled metric core skipped ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure-Python metric core")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; compiled metric core skipped")
        return []
    ext = Extension(
        "quasicop._lampcore",
        ["src/quasicop/_lampcore.pyx"],
        language="c++",
        extra_compile_args=["-O3", "-std=c++17"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
