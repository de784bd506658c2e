"""Compare the compiled and pure-Python packing loops.

    python benchmarks/bench_kernel.py --sizes 51 151 281 --repeat 5

Each row times one full greedy run (median of ``--repeat``) on a generated
instance and checks that both backends return the same plan and objective.
"""

import argparse
import statistics
import time

import numpy as np

from pwtpack.gen import generate_instance
from pwtpack.model import build_context, nn_tour
from pwtpack.objective import StochasticSpec
from pwtpack.pack import KERNELS, run_kernel
from pwtpack.rewards import CODE


def _time(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[51, 151, 281], help="city counts")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if "cython" not in KERNELS:
        print("compiled kernel not built; only the Python backend is available")
    backends = sorted(KERNELS)
    print(f"{'cities':>6} {'items':>6} {'case':<14}" + "".join(f"{b + ' ms':>13}" for b in backends)
          + f"{'speedup':>10}")
    for n in args.sizes:
        inst = generate_instance(n, "unc", seed=args.seed)
        ctx = build_context(inst, nn_tour(inst, args.seed))
        m = inst.n_items
        rng = np.random.default_rng(args.seed)
        cases = {
            "static r3": dict(codes=np.full(m, CODE["r3"]), single_pass=True),
            "iterative r5": dict(codes=np.full(m, CODE["r5"])),
            "sequence r1-r5": dict(codes=rng.integers(1, 6, size=m)),
            "surrogate r7": dict(codes=np.full(m, CODE["r7"]), spec=StochasticSpec(20.0, 0.999)),
        }
        for name, kw in cases.items():
            kw = dict(kw)
            codes = kw.pop("codes")
            times, outs = {}, {}
            for b in backends:
                times[b], outs[b] = _time(lambda: run_kernel(ctx, codes, backend=b, **kw), args.repeat)
            same = len({(tuple(p.items), z) for p, z, _ in outs.values()}) == 1
            speed = times["python"] / times["cython"] if "cython" in times else 1.0
            print(f"{n:>6} {m:>6} {name:<14}" + "".join(f"{times[b] * 1e3:>13.3f}" for b in backends)
                  + f"{speed:>9.1f}x" + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
