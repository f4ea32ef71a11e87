"""Build script: compiles the optional raster/layout kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a missing compiler or Cython only costs speed.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "sitetrace._kernels._native",
                ["src/sitetrace/_kernels/_native.pyx"],
                # -ffp-contract=off: the layout kernel must match the numpy
                # fallback operation-for-operation; FMA fusion would not.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
