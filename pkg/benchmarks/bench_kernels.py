"""Compare the compiled kernels with the numpy fallback on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported side by side, so no environment switch is needed;
FFPERIODS_PURE_PYTHON=1 only changes which one the package itself uses.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from ffperiods import kernels
from ffperiods.field_tower import FiniteField
from ffperiods.matgroup import general_linear


def workloads():
    F4, F9 = FiniteField(2, 2), FiniteField(3, 2)
    G4 = general_linear(F4, 2)
    G9 = general_linear(F9, 2)
    rng = np.random.default_rng(0)
    A3 = rng.integers(0, 4, (50_000, 3, 3))
    B3 = rng.integers(0, 4, (50_000, 3, 3))
    codes = kernels.encode(A3, 4)
    a, b = rng.integers(0, 200, 10**6), rng.integers(0, 200, 10**6)
    return {
        "matmul GL_2(F_9) x g": (lambda m: m.matmul(G9, G9[7], F9.add_table, F9.mul_table)),
        "matmul 3x3 over F_4 (5e4)": (lambda m: m.matmul(A3, B3, F4.add_table, F4.mul_table)),
        "encode 3x3 (5e4)": (lambda m: m.encode(A3, 4)),
        "decode 3x3 (5e4)": (lambda m: m.decode(codes, 4, 3)),
        "bruhat GL_2(F_4)": (lambda m: m.bruhat(G4, F4.add_table, F4.mul_table, F4.neg_table,
                                                F4.inv_table)),
        "bruhat GL_2(F_9)": (lambda m: m.bruhat(G9, F9.add_table, F9.mul_table, F9.neg_table,
                                                F9.inv_table)),
        "pair histogram (1e6)": (lambda m: m.pair_histogram(a, b, 200)),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = {"python": kernels.backend_module("python")}
    try:
        backends["cython"] = kernels.backend_module("cython")
    except ImportError:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'workload':<28}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, fn in workloads().items():
        times = {}
        for name, mod in backends.items():
            fn(mod)  # warm up
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        cells = "".join(f"{times[n] * 1e3:>10.2f}ms" for n in backends)
        speed = f"{times['python'] / times['cython']:>9.1f}x" if "cython" in times else ""
        print(f"{label:<28}{cells}{speed}")


if __name__ == "__main__":
    main()
