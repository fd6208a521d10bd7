"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --repeat 5
"""
import argparse
import time

import numpy as np

from slicequat import kernels


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases(rng, n_points, degree):
    a = np.ascontiguousarray(rng.standard_normal((n_points, 4)))
    b = np.ascontiguousarray(rng.standard_normal((n_points, 4)))
    coeffs = np.ascontiguousarray(rng.standard_normal((degree + 1, 4)))
    pts = np.ascontiguousarray(rng.standard_normal((n_points, 4)) * 0.5)
    c2 = np.ascontiguousarray(rng.standard_normal((degree + 1, 4)))
    real = rng.standard_normal(degree + 1)
    real[-1] = 1.0
    z0 = 0.9 * np.exp(1j * (2 * np.pi * np.arange(degree) / degree + 0.4))
    return {
        "qmul": lambda k: k.qmul(a, b),
        "poly_eval": lambda k: k.poly_eval(coeffs, pts),
        "convolve": lambda k: k.convolve(coeffs, c2),
        "aberth": lambda k: k.aberth(real.astype(np.complex128), z0.copy(), 1e-15, 500),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=20000)
    p.add_argument("--degree", type=int, default=24)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    backends = kernels.available_backends()
    table = cases(np.random.default_rng(args.seed), args.points, args.degree)
    print(f"{'kernel':<10}" + "".join(f"{b:>14}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for name, fn in table.items():
        times = [_best(lambda: fn(kernels.get_backend(b)), args.repeat) for b in backends]
        line = f"{name:<10}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times)
        if len(times) > 1:
            line += f"   {times[0] / times[1]:7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
