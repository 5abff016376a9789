import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("NEWSRANK_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "newsrank._gsdmm_ext",
                ["src/newsrank/_gsdmm_ext.pyx"],
                # no -ffast-math: the kernel must match the Python fallback bit for bit
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
