from setuptools import Extension, setup
from Cython.Build import cythonize
import numpy as np

ext = Extension(
    "lek._kernels._core",
    ["src/lek/_kernels/_core.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O2"],
)

setup(ext_modules=cythonize(ext, language_level=3))
