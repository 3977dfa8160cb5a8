import sys

from setuptools import setup

# The compiled kernel is optional: the package falls back to the pure-Python
# step loop when the extension is unavailable (see mamt._kernel).
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mamt/_core.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # pragma: no cover
    print(f"warning: building without compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
