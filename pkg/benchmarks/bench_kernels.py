"""Time the compiled search kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Both backends run the same inputs and must return the same values; the
script exits 1 if they ever disagree.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from dimkit import ReferenceFunction, gen_parities, gen_singletons, gen_thresholds
from dimkit.classes import FunctionClassTable
from dimkit.combodim import dim_comb, ldim
from dimkit.kernels import _ckernels


def random_table(rng, n, m):
    return FunctionClassTable.from_matrix(rng.choice([-1, 1], size=(n, m)).tolist(), "binary")


def cases(seed):
    rng = np.random.Generator(np.random.Philox(seed))
    yield "thresholds(12)", gen_thresholds(12), ReferenceFunction.col(12)
    yield "thresholds(18)", gen_thresholds(18), ReferenceFunction.col(18)
    yield "singletons(16)", gen_singletons(16), ReferenceFunction.col(16)
    yield "parities(3)", gen_parities(3), ReferenceFunction.col(0)
    yield "parities(4)", gen_parities(4), ReferenceFunction.col(0)
    for n, m in ((8, 8), (12, 12), (16, 16)):
        t = random_table(rng, n, m)
        yield f"random {n}x{m}", t, ReferenceFunction.constant(n, 1)


def timed(fn, repeat):
    best, value = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels unavailable; build the extension first", file=sys.stderr)
        return 2

    header = f"{'case':<16} {'measure':<8} {'value':>5} {'cython s':>10} {'python s':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    mismatch = False
    for label, table, ref in cases(args.seed):
        for measure in ("eluder", "star", "threshold"):
            tc, vc = timed(lambda: dim_comb(table, ref, measure, backend="cython").value, args.repeat)
            tp, vp = timed(lambda: dim_comb(table, ref, measure, backend="python").value, args.repeat)
            mismatch |= vc != vp
            print(f"{label:<16} {measure:<8} {vc:>5} {tc:>10.5f} {tp:>10.5f} {tp / max(tc, 1e-9):>7.1f}x"
                  + ("  MISMATCH" if vc != vp else ""))
        if table.n_points * table.n_functions <= 400:
            tc, vc = timed(lambda: ldim(table, backend="cython"), args.repeat)
            tp, vp = timed(lambda: ldim(table, backend="python"), args.repeat)
            mismatch |= vc != vp
            print(f"{label:<16} {'ldim':<8} {vc:>5} {tc:>10.5f} {tp:>10.5f} {tp / max(tc, 1e-9):>7.1f}x"
                  + ("  MISMATCH" if vc != vp else ""))
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
