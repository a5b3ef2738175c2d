from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; kernels fall back to _pycore
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "tightstrings._core",
                ["src/tightstrings/_core.pyx"],
                language="c++",
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
