import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("RANKONE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        # the pure-Python kernels are selected at import time
        pass
    else:
        ext_modules = cythonize(
            [Extension("rankone._kernels._ckernels",
                       ["src/rankone/_kernels/_ckernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
