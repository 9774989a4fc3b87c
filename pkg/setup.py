from setuptools import Extension, setup
from Cython.Build import cythonize

ext = Extension(
    "quadmaps._kernels_cy",
    ["src/quadmaps/_kernels_cy.pyx"],
    extra_compile_args=["-O3", "-march=native", "-funroll-loops"],
)

setup(ext_modules=cythonize([ext], language_level=3))
