"""Time the jitted kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best wall time of ``repeat`` calls after one warm-up
call (which also triggers numba compilation), and checks that both paths
return the same numbers.
"""
import argparse
import timeit

import numpy as np

from korovkin import kernels
from korovkin._accel import HAS_NUMBA, njit


@njit(cache=False)
def _choquet_rows_jit(values, increments):
    # jitted per-row sort, kept here to show why the package uses numpy for this kernel
    rows, cols = values.shape
    out = np.empty(rows)
    for i in range(rows):
        ordered = np.sort(values[i])
        acc = 0.0
        for j in range(cols):
            acc += ordered[cols - 1 - j] * increments[j]
        out[i] = acc
    return out


def cases(rng):
    x = rng.uniform(0, 1, 2001)
    pa = rng.uniform(0, 1, (3000, 1))
    va = np.sin(9 * pa[:, 0])
    rows = rng.normal(size=(257, 256))
    inc = np.diff(np.sqrt(np.linspace(0, 1, 257)))
    return [
        ("bernstein_matrix n=256, 2001 pts", (256, x), kernels.bernstein_matrix_numpy,
         getattr(kernels, "_bernstein_matrix_numba", None)),
        ("pairwise_delta 3000x3000", (pa, va, pa, va, 0.05), kernels.pairwise_delta_numpy,
         getattr(kernels, "_pairwise_delta_numba", None)),
        ("choquet_rows 257x256", (rows, inc), kernels.choquet_rows_numpy, _choquet_rows_jit),
    ]


def best(fn, args, repeat):
    fn(*args)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"numba available: {HAS_NUMBA}")
    print(f"{'kernel':<36}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, call_args, slow, fast in cases(rng):
        t_np = best(slow, call_args, args.repeat)
        if HAS_NUMBA and fast is not None:
            np.testing.assert_allclose(fast(*call_args), slow(*call_args), rtol=1e-10, atol=1e-13)
            t_nb = best(fast, call_args, args.repeat)
            print(f"{name:<36}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<36}{1e3 * t_np:>12.2f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
