"""Build script: compiles the optional status-kernel extension.

The extension is skipped (pure-Python fallback selected at import) when
Cython or a C toolchain is unavailable.  ``-ffp-contract=off`` keeps the
compiler from fusing multiply-adds so the compiled kernel stays bitwise
identical to the pure kernel.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "bqtool._bqcore",
                sources=["src/bqtool/_bqcore.pyx"],
                extra_compile_args=["-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
