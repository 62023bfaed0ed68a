"""Build script: compiles the optional trajectory kernel extension.

The package works without the extension (a pure-Python kernel is selected
at import time), so the build is marked optional and any compiler failure
degrades to a pure install instead of aborting.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "hopcycles._cykernel",
                ["src/hopcycles/_cykernel.pyx"],
                language="c++",
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
