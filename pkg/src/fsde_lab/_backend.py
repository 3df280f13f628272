"""Numba/NumPy backend selection for the hot kernels.

Every performance-critical inner loop in the package exists in two
functionally identical versions: a numba ``@njit`` one and a pure-NumPy
one.  Which version runs is decided once at import time:

* ``FSDE_LAB_NUMBA=0`` forces the pure-NumPy fallback,
* ``FSDE_LAB_NUMBA=1`` (default) uses numba when it imports cleanly,
* if numba is missing the fallback is used and a warning is emitted.

``scripts/benchmark_kernels.py`` times both paths side by side.
"""

import os
import warnings

_flag = os.environ.get("FSDE_LAB_NUMBA", "1").strip().lower()
_want_numba = _flag not in ("0", "false", "no", "off")

NUMBA_ENABLED = False

if _want_numba:
    try:
        from numba import njit, prange  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - exercised only without numba
        warnings.warn("numba not importable; falling back to pure-NumPy kernels")

if not NUMBA_ENABLED:
    prange = range

    def njit(*args, **kwargs):
        # passthrough decorator: @njit, @njit(), @njit(cache=True) all work
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(func):
            return func

        return wrap


def using_numba():
    """True when the numba-compiled kernel path is active."""
    return NUMBA_ENABLED
