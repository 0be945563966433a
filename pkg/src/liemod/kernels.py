"""Backend selection for the integer kernels.

The compiled extension is used when importable; set ``LIEMOD_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
int_matmul = _kernels_py.int_matmul
row_reduce = _kernels_py.row_reduce

if not os.environ.get("LIEMOD_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        BACKEND = "cython"
        int_matmul = _compiled.int_matmul
        row_reduce = _compiled.row_reduce


def backends():
    """Available backends as a ``{name: module}`` map."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        out["cython"] = _kernels
    return out
