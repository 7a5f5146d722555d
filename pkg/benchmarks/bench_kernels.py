"""Compare the compiled and pure-Python kernels on powers of a bundled ideal.

    python3 benchmarks/bench_kernels.py --ideal example13 --max-power 4

Times the lcm closure and the per-multidegree homology batch separately and
checks that both backends return identical results.
"""

from __future__ import annotations

import argparse
import sys
import time

from bettistab import _pykernels, data_path, power
from bettistab.io import load_ideal


def best_of(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ideal", default="example13", help="bundled ideal name")
    parser.add_argument("--max-power", type=int, default=4)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--char", type=int, default=32003)
    args = parser.parse_args(argv)

    try:
        from bettistab import _ckernels
    except ImportError:
        print("compiled kernels are not built; reinstall with Cython available", file=sys.stderr)
        return 1

    base = load_ideal(data_path(args.ideal + ".ideal"))
    print(f"{'d':>2} {'gens':>5} {'lattice':>8} {'kernel':<8} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    for d in range(1, args.max_power + 1):
        gens = [tuple(g) for g in power(base, d).generators]
        py_t, py_cl = best_of(lambda: _pykernels.lcm_closure(gens), args.repeat)
        c_t, c_cl = best_of(lambda: _ckernels.lcm_closure(gens), args.repeat)
        assert sorted(py_cl) == sorted(c_cl)
        bs = sorted(c_cl)
        print(f"{d:>2} {len(gens):>5} {len(bs):>8} {'closure':<8} {py_t:>9.4f} {c_t:>9.4f} {py_t / c_t:>7.1f}x")
        py_t, py_b = best_of(lambda: _pykernels.betti_batch(gens, bs, args.char), args.repeat)
        c_t, c_b = best_of(lambda: _ckernels.betti_batch(gens, bs, args.char), args.repeat)
        assert py_b == c_b
        print(f"{d:>2} {len(gens):>5} {len(bs):>8} {'homology':<8} {py_t:>9.4f} {c_t:>9.4f} {py_t / c_t:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
