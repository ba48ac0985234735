"""Compare the compiled core with the numpy fallback on the hot kernels.

    python3 benchmarks/bench_core.py [--repeat 5]

Prints one line per kernel with the best wall time of each backend and
the speedup.  Both backends are imported directly, so the extension must
have been built (``pip install -e . --no-build-isolation``).
"""

import argparse
import timeit

import numpy as np

from hardyinner import _fallback

try:
    from hardyinner import _ext
except ImportError:  # pragma: no cover
    _ext = None


def cases(rng):
    def cvec(n):
        return np.ascontiguousarray(rng.standard_normal(n) + 1j * rng.standard_normal(n))

    long_coeffs = cvec(1 << 20)
    pts = np.ascontiguousarray(0.9 * np.exp(2j * np.pi * rng.uniform(size=16)))
    a, b = cvec(1 << 20), cvec(1 << 20)
    w = np.ascontiguousarray((np.arange(1 << 20) + 1.0) ** 1.5)
    mid = cvec(2000)
    small = cvec(9)
    return [
        ("horner  N=2^20, 16 points", "horner", (long_coeffs, pts)),
        ("wdot    N=2^20", "wdot", (a, b, w)),
        ("moments N=2000, kmax=20", "moments", (mid, w[:2000], 20, False)),
        ("moments N=2000, kmax=20, compensated", "moments", (mid, w[:2000], 20, True)),
        ("residual_jacobian N=8", "residual_jacobian", (small, w[:9])),
    ]


def best_time(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05:
        number *= 4
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ext is None:
        raise SystemExit("compiled extension not built")
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'cython':>12s} {'python':>12s} {'speedup':>8s}")
    for label, name, fargs in cases(rng):
        t_ext = best_time(getattr(_ext, name), fargs, args.repeat)
        t_py = best_time(getattr(_fallback, name), fargs, args.repeat)
        print(f"{label:40s} {t_ext * 1e3:10.3f}ms {t_py * 1e3:10.3f}ms {t_py / t_ext:7.1f}x")


if __name__ == "__main__":
    main()
