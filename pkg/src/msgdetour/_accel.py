"""Optional numba acceleration.

Set ``MSGDETOUR_DISABLE_NUMBA=1`` to run every kernel as plain Python. The
jitted and interpreted paths execute the same source, so results are identical;
only speed differs.
"""

import os

_FLAG = "MSGDETOUR_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_DISABLED = os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = numba is not None and not NUMBA_DISABLED


def njit(fn):
    """Compile ``fn`` with numba when enabled; otherwise return it untouched.

    The undecorated function stays reachable as ``.py_func`` on both paths.
    """
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    fn.py_func = fn
    return fn


def backend() -> str:
    return f"numba {numba.__version__}" if USE_NUMBA else "python"
