"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --instance rd400 --repeat 20

Both backends get identical inputs and must return identical tours; the
script refuses to report a speedup otherwise.
"""
import argparse
import time

import numpy as np

from fsstsp import _pykernels
from fsstsp.construction import greedy_randomized
from fsstsp.engine import FssParams, solve
from fsstsp.instance import build_instance
from fsstsp.local_search import three_opt, two_opt
from fsstsp.tsplib import bundled_instance


def timed(fn, repeat):
    out = None
    t0 = time.perf_counter()
    for _ in range(repeat):
        out = fn()
    return (time.perf_counter() - t0) / repeat, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instance", default="rd400")
    ap.add_argument("--repeat", type=int, default=10)
    ap.add_argument("--run-budget", type=int, default=200,
                    help="evaluations in the end-to-end FSS-2OPT run")
    args = ap.parse_args()

    try:
        from fsstsp import _ckernels
    except ImportError:
        raise SystemExit("compiled extension not built; run pip install -e . first")

    inst = build_instance(bundled_instance(args.instance))
    start = greedy_randomized(inst, np.random.default_rng(0))
    cases = {
        "construct": lambda k: greedy_randomized(inst, np.random.default_rng(1), k),
        "2-opt": lambda k: two_opt(inst, start, kernels=k),
        "3-opt": lambda k: three_opt(inst, start, kernels=k),
        "fss-2opt run": lambda k: solve(inst, FssParams(local_search="2opt", seed=1,
                                                         max_solutions=args.run_budget), k),
    }
    print(f"{args.instance}: {inst.dimension} nodes, {args.repeat} repeats")
    print(f"{'kernel':<14}{'cython [ms]':>14}{'python [ms]':>14}{'speedup':>10}")
    for name, fn in cases.items():
        reps = 1 if name.endswith("run") else args.repeat
        tc, a = timed(lambda: fn(_ckernels), reps)
        tp, b = timed(lambda: fn(_pykernels), reps)
        if name.endswith("run"):
            same = a.trace(False) == b.trace(False)
        else:
            same = np.array_equal(a.order, b.order)
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<14}{tc * 1e3:>14.2f}{tp * 1e3:>14.2f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
