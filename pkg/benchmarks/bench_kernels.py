"""Time the compiled kernels against the pure-Python twin.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]

Prints one line per kernel with the median time of each backend and the
speedup.  Results are also checked for bit-equality.
"""

import argparse
import statistics
import time

import numpy as np

from rsum._backend import available_backends
from rsum.accumulators import bucket_sum_nonrecursive, bucket_sum_recursive, compensated_sum, naive_sum
from rsum.oracle import Superaccumulator

CASES = {
    "naive": lambda a, b: naive_sum(a, backend=b).sum,
    "compensated": lambda a, b: compensated_sum(a, backend=b).sum,
    "bucket-recursive": lambda a, b: bucket_sum_recursive(a, backend=b).sum,
    "bucket-nonrec-corrected": lambda a, b: bucket_sum_nonrecursive(a, backend=b).sum,
    "superaccumulator": lambda a, b: Superaccumulator(a, backend=b).round(),
}


def median_seconds(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--n", type=int, default=200_000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    backends = available_backends()
    if "cython" not in backends:
        raise SystemExit("compiled kernels not built; nothing to compare")
    rng = np.random.default_rng(args.seed)
    a = rng.standard_normal(args.n) * 10.0 ** rng.integers(-10, 10, args.n)
    print(f"n = {args.n}, median of {args.repeat}")
    print(f"{'kernel':<26}{'cython ms':>12}{'python ms':>12}{'speedup':>10}  same bits")
    for name, fn in CASES.items():
        r_c, r_p = fn(a, "cython"), fn(a, "python")
        t_c = median_seconds(lambda: fn(a, "cython"), args.repeat)
        t_p = median_seconds(lambda: fn(a, "python"), args.repeat)
        same = np.float64(r_c).tobytes() == np.float64(r_p).tobytes()
        print(f"{name:<26}{t_c * 1e3:>12.2f}{t_p * 1e3:>12.1f}{t_p / t_c:>9.0f}x  {same}")


if __name__ == "__main__":
    main()
