#!/usr/bin/env python3
"""Time the detrending kernel: compiled extension vs the numpy fallback.

Both implementations share one contract (profiles in, pairwise residual
cross-sums out), so this script times them on identical inputs and
reports the ratio.  Sizes default to the shapes the rolling pipeline
actually produces: a few dozen assets, a couple hundred observations,
box widths around ten.

Run from a checkout where the package is installed:

    python3 benchmarks/bench_dcca.py
    python3 benchmarks/bench_dcca.py --assets 40 --length 500 --box 10 --repeat 7
"""

import argparse
import sys
import time

import numpy as np

from ddfen._dcca_numpy import pair_cross_sums as numpy_kernel

try:
    from ddfen._dcca_cy import pair_cross_sums as cython_kernel
except ImportError:
    cython_kernel = None


def make_profiles(rng, k, length):
    returns = rng.standard_normal((length, k))
    profiles = np.cumsum(returns - returns.mean(axis=0), axis=0).T
    return np.ascontiguousarray(profiles)


def best_of(fn, profiles, w, repeat):
    timings = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(profiles, w)
        timings.append(time.perf_counter() - t0)
    return min(timings), out


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="benchmark the detrended cross-sum kernels")
    parser.add_argument("--assets", type=int, default=30,
                        help="number of series (default 30)")
    parser.add_argument("--length", type=int, default=400,
                        help="observations per series (default 400)")
    parser.add_argument("--box", type=int, default=10,
                        help="detrending box width (default 10)")
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions, best-of (default 5)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    profiles = make_profiles(rng, args.assets, args.length)
    pairs = args.assets * (args.assets + 1) // 2
    print(f"profiles: {args.assets} x {args.length}, box {args.box}, "
          f"{pairs} pairs, best of {args.repeat}")

    t_numpy, out_numpy = best_of(numpy_kernel, profiles, args.box,
                                 args.repeat)
    print(f"numpy fallback     : {t_numpy * 1e3:9.3f} ms")

    if cython_kernel is None:
        print("compiled extension : not built (pip install -e . without "
              "DDFEN_SKIP_EXT)")
        return 0

    t_cy, out_cy = best_of(cython_kernel, profiles, args.box, args.repeat)
    print(f"compiled extension : {t_cy * 1e3:9.3f} ms")
    print(f"speedup            : {t_numpy / t_cy:9.2f}x")

    gap = np.abs(out_numpy - out_cy).max()
    scale = np.abs(out_numpy).max()
    print(f"max |difference|   : {gap:.3e} (relative {gap / scale:.3e})")
    if gap > 1e-9 * scale:
        print("KERNELS DISAGREE", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
