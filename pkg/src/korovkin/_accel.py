"""Optional numba acceleration.

Set ``KOROVKIN_DISABLE_NUMBA=1`` (or leave numba uninstalled) to run every
kernel through its pure-numpy implementation.
"""
import os

_DISABLED = os.environ.get("KOROVKIN_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("disabled by KOROVKIN_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn
