"""Time the numba and numpy kernel backends on the verifier's two inner loops.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from bhconst.verifier import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(rng):
    # (label, callable factory) pairs; each factory builds fresh inputs per call
    for n_slots, N in ((2, 3), (3, 3), (2, 5), (3, 4)):
        c2d = rng.standard_normal((N**n_slots, N))
        yield f"vertex_values n={n_slots + 1} N={N}", lambda c=c2d, s=n_slots, N=N: kernels.vertex_values(c, s, N)
    for n, N, k in ((3, 3, 64), (4, 4, 64), (5, 3, 64)):
        cflat = (rng.standard_normal(N**n) + 1j * rng.standard_normal(N**n))
        starts = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(k, n, N)))
        yield (f"ascend_many n={n} N={N} starts={k}",
               lambda c=cflat, st=starts, n=n, N=N: kernels.ascend_many(c, n, N, st.copy(), False))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    rows = list(cases(rng))
    kernels.set_backend("numba")
    for _, fn in rows:  # compile outside the timed region
        fn()
    print(f"{'case':40s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}")
    for label, fn in rows:
        kernels.set_backend("numpy")
        t_np = best_of(fn, args.repeat)
        kernels.set_backend("numba")
        t_nb = best_of(fn, args.repeat)
        print(f"{label:40s} {1e3 * t_np:12.2f} {1e3 * t_nb:12.2f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
