import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext = Extension(
    "mcu_synth._kernels._core",
    sources=["src/mcu_synth/_kernels/_core.pyx"],
    include_dirs=[numpy.get_include()],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    extra_compile_args=["-O3"],
)

if cythonize is not None:
    ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})
else:
    # Package still works without the compiled core (pure-numpy fallback).
    ext_modules = []

setup(ext_modules=ext_modules)
