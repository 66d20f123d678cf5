import os

import numpy
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class optional_build_ext(build_ext):
    """Build the accelerator if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:  # missing compiler, broken toolchain, ...
            print(f"WARNING: extension build failed ({exc}); "
                  "cyldom will use the pure-Python kernel")

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:
            print(f"WARNING: could not compile {ext.name} ({exc}); "
                  "cyldom will use the pure-Python kernel")


ext_modules = []
if cythonize is not None and not os.environ.get("CYLDOM_SKIP_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "cyldom._kernel",
                ["src/cyldom/_kernel.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
