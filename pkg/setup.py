import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off keeps the C arithmetic identical to numpy's two-rounding
# multiply-add, so the pure-arithmetic kernels match the fallback bitwise.
ext = Extension(
    "cixl2._kernels",
    ["src/cixl2/_kernels.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3", "-ffp-contract=off"],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)

setup(ext_modules=cythonize([ext], language_level="3"))
