from setuptools import Extension, setup

# The compiled kernel is an optional speedup; folcalc._kernels falls back to
# the numpy implementation when the extension is unavailable.
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "folcalc._kernels._core",
        ["src/folcalc/_kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level="3")
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
