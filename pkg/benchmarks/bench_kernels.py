"""Time the numba kernels against the pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best wall time of ``--repeat`` runs after one warm-up
call (which also pays the JIT compile cost for numba).
"""
import argparse
import time

import numpy as np

from harmonic_kac import _kernels_numba as nb
from harmonic_kac import _kernels_numpy as npk


def best_time(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    c = (rng.standard_normal(201) + 1j * rng.standard_normal(201)).astype(np.complex128)
    zs = np.exp(2j * np.pi * rng.random(4000)) * (0.5 + rng.random(4000))
    z0 = np.exp(2j * np.pi * (np.arange(200) + 0.25) / 200) * 1.1
    logw = np.zeros(10001)
    lw = np.log(np.linspace(0.5, 1.5, 64))
    shift = np.maximum(0.0, 10000 * lw)
    m = rng.standard_normal((60, 60)) + 1j * rng.standard_normal((60, 60))
    return [
        ("horner deg 200 x 4000 pts", "horner", (c, zs)),
        ("newton_ratio deg 200 x 4000 pts", "newton_ratio", (c, zs)),
        ("aberth deg 200", "aberth", (c, z0, 500, 1e-13)),
        ("power_sums n=10^4 x 64 w", "power_sums", (logw, lw, shift)),
        ("det_lu 60x60", "det_lu", (m,)),
    ]


def main() -> int:
    p = argparse.ArgumentParser(description="numba vs numpy kernel timings")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':34s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for label, name, fargs in cases(rng):
        t_nb = best_time(getattr(nb, name), fargs, args.repeat)
        t_np = best_time(getattr(npk, name), fargs, args.repeat)
        print(f"{label:34s} {1e3 * t_nb:11.3f} {1e3 * t_np:11.3f} {t_np / t_nb:8.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
