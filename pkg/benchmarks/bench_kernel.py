"""Benchmark the compiled polynomial kernel against the pure-Python one.

Two views:
  * microbenchmarks of the raw kernel operations (both modules imported
    side by side), and
  * an end-to-end workload (tangent-axiom checking + a nerve functoriality
    batch) run in subprocesses with TANCAT_PURE toggled, since the backend
    is fixed at import time.

Usage: python benchmarks/bench_kernel.py [--quick]
"""

import argparse
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from tancat._kernel import _poly_py

try:
    from tancat._kernel import _poly_cy
except ImportError:
    _poly_cy = None

WORKLOAD = r"""
import random, time
from tancat import algebroid as AL, nerve as NV, tangent as TG, wterm
from tancat import kernel_backend
start = time.perf_counter()
for n in (1, 2):
    TG.check_tangent_axioms(n)
rng = random.Random(1)
A = AL.make_algebroid(1, 2, [["1", "x1"]],
                      [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]])
pairs = [wterm.random_equal_pair(rng, depth=2) for _ in range(25)]
NV.check_functoriality(A, pairs)
NV.check_cartesian_p(A)
print(f"{kernel_backend} workload: {time.perf_counter() - start:.3f}s")
"""


def random_poly(rng, n_vars, n_terms, deg):
    out = {}
    for _ in range(n_terms):
        mono = tuple(rng.randint(0, deg) for _ in range(n_vars))
        out[mono] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
    return out


def bench(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def micro(quick: bool) -> None:
    rng = random.Random(0)
    n_polys = 40 if quick else 150
    pairs = [(random_poly(rng, 6, 25, 3), random_poly(rng, 6, 25, 3))
             for _ in range(n_polys)]
    subs = [(random_poly(rng, 3, 8, 2),
             [random_poly(rng, 6, 4, 1) for _ in range(3)])
            for _ in range(n_polys)]
    backends = [("python", _poly_py)]
    if _poly_cy is not None:
        backends.append(("cython", _poly_cy))

    print(f"{'op':<12}" + "".join(f"{name:>12}" for name, _ in backends) + "   speedup")
    rows = {
        "add": lambda K: [K.poly_add(a, b) for a, b in pairs],
        "mul": lambda K: [K.poly_mul(a, b) for a, b in pairs],
        "compose": lambda K: [K.poly_compose(p, list(args), 6) for p, args in subs],
    }
    for op, runner in rows.items():
        times = [bench(runner, K) for _, K in backends]
        speedup = times[0] / times[-1] if len(times) > 1 else 1.0
        cells = "".join(f"{t * 1e3:>10.1f}ms" for t in times)
        print(f"{op:<12}{cells}   {speedup:>5.2f}x")


def end_to_end() -> None:
    print("\nend-to-end workload (subprocess per backend):")
    for pure in ("1", "0"):
        env = dict(os.environ, TANCAT_PURE=pure)
        proc = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                              capture_output=True, text=True)
        sys.stdout.write(proc.stdout or proc.stderr)


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()
    if _poly_cy is None:
        print("note: compiled kernel not available; timing pure Python only")
    micro(args.quick)
    end_to_end()
