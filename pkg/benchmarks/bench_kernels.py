"""Compare the compiled scoring kernel against the pure-Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--pairs N] [--repeat R]

Scores N random pose pairs with each available kernel and reports the
per-frame cost. The compiled kernel is only benchmarked when it was built.
"""

import argparse
import random
import time

import numpy as np

from poseguide._kernels import pure
from poseguide.skeleton import KEYPOINT_NAMES, Keypoint, Pose, pose_to_array

try:
    from poseguide._kernels import _fast
except ImportError:
    _fast = None


def random_array(rng):
    kps = {n: Keypoint(n, rng.random(), rng.random(), rng.random())
           for n in KEYPOINT_NAMES}
    return pose_to_array(Pose(kps, 640, 360), True)


def bench(kernel, pairs, repeat):
    out = np.empty(10)
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for a, b in pairs:
            kernel.score_pair(a, b, 0.3, out)
        best = min(best, time.perf_counter() - start)
    return best / len(pairs)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = random.Random(0)
    pairs = [(random_array(rng), random_array(rng)) for _ in range(args.pairs)]

    t_pure = bench(pure, pairs, args.repeat)
    print(f"pure    : {t_pure * 1e6:8.2f} us/frame")
    if _fast is None:
        print("cython  : not built (pip install -e . with Cython available)")
    else:
        t_fast = bench(_fast, pairs, args.repeat)
        print(f"cython  : {t_fast * 1e6:8.2f} us/frame  ({t_pure / t_fast:.1f}x faster)")


if __name__ == "__main__":
    main()
