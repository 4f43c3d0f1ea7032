"""Dense integer convolution, the inner loop of polynomial and series products.

Two interchangeable backends compute the same exact result:

* numba: an ``@njit`` int64 loop, used when the operands are small enough that
  no partial sum can overflow;
* numpy: ``np.convolve`` on int64 under the same bound.

Operands outside the int64 bound always go through ``np.convolve`` on object
arrays, which keeps Python's arbitrary-precision integers. Set
``QSERIES_DISABLE_NUMBA=1`` to force the numpy backend.
"""
import os

import numpy as np

# max|a| * max|b| * min(len) must stay below this for int64 to be exact
INT64_BOUND = 1 << 62


def _env_disabled():
    return os.environ.get("QSERIES_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


try:
    if _env_disabled():
        raise ImportError("numba disabled by QSERIES_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _convolve_i64_numpy(a, b):
    return np.convolve(a, b)


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _convolve_i64_numba(a, b):
        n, m = a.shape[0], b.shape[0]
        out = np.zeros(n + m - 1, dtype=np.int64)
        for i in range(n):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(m):
                out[i + j] += ai * b[j]
        return out

else:
    _convolve_i64_numba = None

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def set_backend(name):
    """Switch the int64 backend at runtime ("numba" or "numpy"); used by the benchmark."""
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend unavailable")
    BACKEND = name


def fits_int64(a, b):
    ma = max(map(abs, a))
    mb = max(map(abs, b))
    return ma * mb * min(len(a), len(b)) < INT64_BOUND


def convolve(a, b):
    """Exact full convolution of two non-empty integer lists, returned as a list of ints."""
    if fits_int64(a, b):
        x = np.asarray(a, dtype=np.int64)
        y = np.asarray(b, dtype=np.int64)
        if BACKEND == "numba":
            out = _convolve_i64_numba(x, y)
        else:
            out = _convolve_i64_numpy(x, y)
        return [int(v) for v in out]
    x = np.array(a, dtype=object)
    y = np.array(b, dtype=object)
    return list(np.convolve(x, y))
