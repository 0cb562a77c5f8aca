"""Numba switch.

Set ``RINGCOVER_NUMBA=0`` to run every kernel as plain Python/numpy.
The flag is read once at import time.
"""
import os

_flag = os.environ.get("RINGCOVER_NUMBA", "1").strip().lower()
USE_NUMBA = _flag not in ("0", "false", "no", "off")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if USE_NUMBA:
    njit = numba.njit
else:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrapper(f):
            return f

        return wrapper


def backend() -> str:
    return "numba" if USE_NUMBA else "python"
