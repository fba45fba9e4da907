"""Selects the Monte Carlo kernel implementation at import time.

The compiled extension is preferred; setting ``PHASEKICK_PURE_PYTHON=1``
forces the numpy fallback.
"""

import os

from . import _kernels_py

try:
    if os.environ.get("PHASEKICK_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

DEFAULT = "cython" if _compiled is not None else "python"


def get(name: str | None = None):
    """Kernel module by name (``"cython"`` or ``"python"``); default if None."""
    name = name or DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"backend {name!r} not available (have: {', '.join(sorted(BACKENDS))})"
        ) from None
