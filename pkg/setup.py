from setuptools import Extension, setup

import numpy

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build still works, pure backend only
    cythonize = None

extensions = [
    Extension(
        "dhgpart._kernels",
        ["src/dhgpart/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(extensions, language_level="3") if cythonize else [],
)
