from setuptools import Extension, setup

import numpy as np
from Cython.Build import cythonize

# The compiled kernels are optional: if the build fails the package falls
# back to the pure-numpy reference implementations at import time.
ext_modules = cythonize(
    [
        Extension(
            "chartcontext.kernels._core",
            ["src/chartcontext/kernels/_core.pyx"],
            include_dirs=[np.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            optional=True,
        )
    ],
    language_level=3,
)

setup(ext_modules=ext_modules)
