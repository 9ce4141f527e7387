"""Backend selection for the compiled kernels.

Set ``ERDOS_STRAUS_NO_NUMBA=1`` to force the pure-numpy path; it is also
used automatically when numba cannot be imported.
"""
import os

_FLAG = "ERDOS_STRAUS_NO_NUMBA"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

HAVE_NUMBA = _numba is not None
NUMBA_DISABLED = os.environ.get(_FLAG, "").strip().lower() in ("1", "true", "yes", "on")
USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED


def njit(fn):
    if HAVE_NUMBA:
        return _numba.njit(cache=True)(fn)
    return fn


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
