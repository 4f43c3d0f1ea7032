"""Compare the numba and numpy int64 convolution backends.

Run with ``python3 benchmarks/bench_kernels.py``. Reports the best of several
repeats for raw convolutions and for a polynomial-product workload.
"""
import argparse
import timeit

import numpy as np

from qseries import _kernels
from qseries.polyq import LaurentPoly


def _workload_convolve(n):
    rng = np.random.default_rng(n)
    a = [int(v) for v in rng.integers(-10**6, 10**6, n)]
    b = [int(v) for v in rng.integers(-10**6, 10**6, n)]
    return lambda: _kernels.convolve(a, b)


def _workload_products(n):
    p = LaurentPoly.from_coeffs([1] * n)
    return lambda: p * p * p


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    if _kernels.HAVE_NUMBA:
        _kernels.set_backend("numba")
        _kernels.convolve([1, 2], [3, 4])  # compile outside the timings
    print(f"{'workload':28s}" + "".join(f"{b:>12s}" for b in backends))
    cases = [(f"convolve n={n}", _workload_convolve(n)) for n in (64, 512, 4096)]
    cases += [(f"poly cube, {n} terms", _workload_products(n)) for n in (100, 1000)]
    for label, fn in cases:
        row = []
        for b in backends:
            _kernels.set_backend(b)
            number = 20
            best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
            row.append(f"{best * 1e3:10.3f}ms")
        print(f"{label:28s}" + "".join(f"{c:>12s}" for c in row))


if __name__ == "__main__":
    main()
