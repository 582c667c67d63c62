"""Time the offline DP's numba kernel against the pure-numpy fallback.

Run: python benchmarks/dp_backends.py [--sizes 500,2000,5000] [--k 50] [--repeats 3]

Both kernels share the comparison order, so besides timing we also assert
their outputs are bit-identical on every benchmarked instance.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from opr.offline import _HAVE_NUMBA, _dp_kernel_numpy


def _time(fn, prices, k, beta, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(prices, k, beta)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500,2000,5000")
    parser.add_argument("--k", type=int, default=50)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if not _HAVE_NUMBA:
        print("numba not installed; only the numpy fallback is available")
        return 1
    from opr.offline import _dp_kernel_numba

    rng = np.random.default_rng(0)
    sizes = [int(s) for s in args.sizes.split(",")]
    # warm up the JIT outside the timed region
    _dp_kernel_numba(rng.uniform(1, 10, 16), 4, 1.0)

    print(f"{'T':>6} {'k':>4} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for T in sizes:
        prices = rng.uniform(1.0, 100.0, T)
        t_np, out_np = _time(_dp_kernel_numpy, prices, args.k, 2.5, args.repeats)
        t_nb, out_nb = _time(_dp_kernel_numba, prices, args.k, 2.5, args.repeats)
        assert np.array_equal(out_np[0], out_nb[0]), "cost tables diverge"
        assert np.array_equal(out_np[1], out_nb[1]), "backpointers diverge"
        print(
            f"{T:>6} {args.k:>4} {t_np * 1e3:>12.2f} {t_nb * 1e3:>12.2f} "
            f"{t_np / t_nb:>8.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
