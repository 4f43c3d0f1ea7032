import numpy as np
import pytest

from qseries import _kernels


def _reference(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_backends_agree(backend):
    if backend == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    rng = np.random.default_rng(7)
    old = _kernels.BACKEND
    try:
        _kernels.set_backend(backend)
        for n, m in ((1, 1), (5, 9), (120, 80)):
            a = [int(v) for v in rng.integers(-1000, 1000, n)]
            b = [int(v) for v in rng.integers(-1000, 1000, m)]
            assert _kernels.convolve(a, b) == _reference(a, b)
    finally:
        _kernels.set_backend(old)


def test_overflow_guard_keeps_exactness():
    a = [2**62, 3, -(2**61)]
    b = [2**40, -1]
    assert not _kernels.fits_int64(a, b)
    assert _kernels.convolve(a, b) == _reference(a, b)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.set_backend("fortran")
