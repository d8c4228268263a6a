"""Build hook for the optional compiled kernels.

The extension is skipped when Cython or a C compiler is unavailable; the
package then runs on the pure-Python kernels.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("LINELAB_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "linelab._ckernels",
                    ["src/linelab/_ckernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": 3},
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"linelab: building without compiled kernels ({exc})")
        ext_modules = []

setup(ext_modules=ext_modules)
