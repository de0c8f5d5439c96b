"""Numba switch.

Set ``QUASIWIDE_NO_NUMBA=1`` to run every kernel as plain Python over numpy
arrays. Compiled and fallback paths share one source, so they cannot drift.
"""

import os

_FLAG = os.environ.get("QUASIWIDE_NO_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def kernel(fn):
    """Compile ``fn`` with ``numba.njit`` unless disabled.

    The undecorated function stays reachable as ``.py_func`` either way.
    """
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    fn.py_func = fn
    return fn
