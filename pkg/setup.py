from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "hhbounds._core",
                ["src/hhbounds/_core.pyx"],
                extra_compile_args=["-O3"],
                optional=True,  # pure-Python fallback is selected at import
            )
        ],
        language_level=3,
    )
)
