"""Compare the compiled kernels with their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Also times one full RFI analysis with each backend swapped in.
"""

import argparse
import math
import timeit

import numpy as np

from rfiqkd import ChannelParams, analyze, ideal_table, kernels
from rfiqkd import _fallback

try:
    from rfiqkd import _kernels as compiled
except ImportError:
    compiled = None


def _scan_args(m, seed=0):
    rng = np.random.default_rng(seed)
    a0, a1, b0, b1 = (rng.uniform(0.5, 1.0, m * m) for _ in range(4))
    return (a0, a1, b0, b1, 0.6, 0.07, 0.07, 0.495, 0.495, 1e-12)


def _sumset_args(n, seed=0):
    rng = np.random.default_rng(seed)
    return (rng.random(n) < 0.2).astype(np.uint8), (rng.random(n) < 0.2).astype(np.uint8)


def _time(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def _analysis_time(impl, repeat):
    table = ideal_table(ChannelParams(0.01, math.pi / 3))
    saved = kernels.bound_scan, kernels.cyclic_sumset
    kernels.bound_scan, kernels.cyclic_sumset = impl.bound_scan, impl.cyclic_sumset
    try:
        return min(timeit.repeat(lambda: analyze(table), number=1, repeat=repeat))
    finally:
        kernels.bound_scan, kernels.cyclic_sumset = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if compiled is None:
        print("compiled extension not built; only the numpy fallback is available")
        return

    cases = [
        ("bound_scan 9x9 axis", "bound_scan", _scan_args(9)),
        ("bound_scan 41x41 axis", "bound_scan", _scan_args(41)),
        ("cyclic_sumset n=360", "cyclic_sumset", _sumset_args(360)),
        ("cyclic_sumset n=3600", "cyclic_sumset", _sumset_args(3600)),
    ]
    print(f"{'kernel':<24}{'cython [ms]':>14}{'numpy [ms]':>14}{'speedup':>10}")
    for label, name, call_args in cases:
        fast = _time(getattr(compiled, name), call_args, args.repeat) * 1e3
        slow = _time(getattr(_fallback, name), call_args, args.repeat) * 1e3
        print(f"{label:<24}{fast:>14.3f}{slow:>14.3f}{slow / fast:>9.1f}x")

    fast = _analysis_time(compiled, args.repeat) * 1e3
    slow = _analysis_time(_fallback, args.repeat) * 1e3
    print(f"{'analyze (RFI, e_b=0.01)':<24}{fast:>14.3f}{slow:>14.3f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
