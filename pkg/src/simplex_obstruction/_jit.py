"""numba switch.

Set ``SIMPLEX_OBSTRUCTION_NUMBA=0`` to force the pure-numpy kernels; the
numba kernels are used by default when numba imports cleanly.
"""

import os

_FLAG = os.environ.get("SIMPLEX_OBSTRUCTION_NUMBA", "1").strip().lower()

try:
    from numba import njit as _njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG not in ("0", "false", "no", "off")


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if HAVE_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def default_backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
