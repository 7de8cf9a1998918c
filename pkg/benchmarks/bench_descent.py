"""Compare the compiled and pure-Python descent kernels.

    python3 benchmarks/bench_descent.py [--repeat 3]

Problems are the region-infimum computations the loss rules run: every
feasible ranking of seeded random profiles, for each loss.
"""

import argparse
import random
import time

from linsoc import _descent_py, enumerate_feasible_rankings, gen_profile
from linsoc.losses import LOSSES, difference_rows, pair_weights
from linsoc.rules_opt import _cone_rows

try:
    from linsoc import _descent
except ImportError:
    _descent = None


def problems(count=12):
    out = []
    for seed in range(count):
        rng = random.Random(seed)
        p = gen_profile(seed, rng.randint(3, 5), rng.randint(2, 3), rng.choice((3, 5, 7)))
        rows, w = difference_rows(p, pair_weights(p))
        for r in enumerate_feasible_rankings(p.instance):
            out.append((rows, w, _cone_rows(p.instance, r), p.instance.dimension))
    return out


def run(kernel, probs, kind):
    t = time.perf_counter()
    values = [kernel.minimize_on_cone(D, w, G, kind, [0.0] * d)[1] for D, w, G, d in probs]
    return time.perf_counter() - t, values


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--profiles", type=int, default=12)
    args = ap.parse_args()
    probs = problems(args.profiles)
    print(f"{len(probs)} region problems per loss")
    if _descent is None:
        print("compiled kernel not built; nothing to compare")
        return
    print(f"{'loss':<12}{'python s':>10}{'compiled s':>12}{'speedup':>9}{'max |diff|':>12}")
    for name, spec in LOSSES.items():
        tp = min(run(_descent_py, probs, spec.code)[0] for _ in range(args.repeat))
        tc = min(run(_descent, probs, spec.code)[0] for _ in range(args.repeat))
        diff = max(abs(a - b) for a, b in zip(run(_descent_py, probs, spec.code)[1], run(_descent, probs, spec.code)[1]))
        print(f"{name:<12}{tp:>10.3f}{tc:>12.4f}{tp / tc:>9.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
