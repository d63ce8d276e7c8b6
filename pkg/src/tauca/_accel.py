"""Numba switch.

Set ``TAUCA_DISABLE_NUMBA=1`` to run every kernel through its pure Python/numpy
path. The flag is read once at import time.
"""

import os

_DISABLED = os.environ.get("TAUCA_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("disabled by TAUCA_DISABLE_NUMBA")
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:
    _njit = None
    HAS_NUMBA = False


def jit(func):
    """Compile ``func`` with ``numba.njit(cache=True)`` when acceleration is on."""
    if HAS_NUMBA:
        return _njit(cache=True)(func)
    return func
