"""Backend selection for the numeric kernels.

The compiled module is used when it imports cleanly.  Setting
``LINELAB_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("LINELAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_backend = None

try:
    from . import _ckernels as _probe  # noqa: F401
    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False

K = compiled_backend if compiled_backend is not None else python_backend
BACKEND = K.BACKEND


def backend_name() -> str:
    return BACKEND
