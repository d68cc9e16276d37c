from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "greenlem._esym",
                ["src/greenlem/_esym.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-Python fallback in greenlem/_esym_py.py keeps the package usable.
    extensions = []

setup(ext_modules=extensions)
