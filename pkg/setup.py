import sys

from setuptools import setup

# The compiled kernel is an optimization, not a requirement: if Cython or a C
# compiler is missing the package installs with the pure numpy backend only.
try:
    from Cython.Build import cythonize
    from setuptools.extension import Extension
    import numpy

    exts = cythonize(
        [
            Extension(
                "modtower._gfkern",
                ["src/modtower/_gfkern.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover
    print("modtower: building without the compiled kernel (%s)" % exc, file=sys.stderr)
    exts = []

setup(ext_modules=exts)
