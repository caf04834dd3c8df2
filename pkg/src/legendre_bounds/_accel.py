"""Numba toggle.

Set ``LEGENDRE_BOUNDS_NO_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable.
"""

import functools
import os

_DISABLED = os.environ.get("LEGENDRE_BOUNDS_NO_NUMBA", "").strip() not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    import numba as _nb
except ImportError:
    _nb = None

HAVE_NUMBA = _nb is not None

if HAVE_NUMBA:
    njit = functools.partial(_nb.njit, cache=True, nogil=True)
else:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
