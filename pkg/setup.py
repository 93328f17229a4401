"""Build script: compiles the hot-loop kernels when Cython is available.

The compiled extension is optional.  If Cython (or a C compiler) is missing
the package installs anyway and falls back to the pure-Python kernels in
``singling.kernels.pure`` at import time.

Floating-point flags matter here: the compiled kernels must produce results
bit-identical to the pure-Python reference, so fast-math and FP contraction
stay off.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "singling.kernels._fast",
                ["src/singling/kernels/_fast.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
