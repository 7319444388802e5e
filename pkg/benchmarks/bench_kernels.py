"""Compare the compiled and pure-Python max-plus kernels.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import random
import timeit

from nagraded import _kernels_py, kernels

try:
    from nagraded import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    line = [rng.randint(-50, 50) for _ in range(65)]
    tri = [[rng.randint(-50, 50) if i + j <= 16 else kernels.NEG for j in range(17)] for i in range(17)]
    return {
        "conv1 65x65": (lambda impl: kernels.maxplus_conv(line, line, 1, impl)),
        "power1 r=64": (lambda impl: kernels.maxplus_power(line[:2], 64, 1, impl)),
        "conv2 17^2 x 17^2": (lambda impl: kernels.maxplus_conv(tri, tri, 2, impl)),
        "power2 r=3 (sumset, N=48)": (lambda impl: kernels.maxplus_power(tri, 3, 2, impl)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = random.Random(0)
    print(f"{'kernel':28s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        tp = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{name:28s} {tp:12.2f} {'n/a':>14s} {'':>8s}")
            continue
        assert fn(_kernels) == fn(_kernels_py)
        tc = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:28s} {tp:12.2f} {tc:14.2f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
