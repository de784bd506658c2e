import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("PWTPACK_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        import numpy as np

        ext_modules = cythonize(
            [
                Extension(
                    "pwtpack._ckernel",
                    ["src/pwtpack/_ckernel.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
