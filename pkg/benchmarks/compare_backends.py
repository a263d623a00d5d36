"""Compare the compiled alignment kernel against the pure-Python fallback.

Runs the exact and multiscale solvers on identical warped trajectory pairs
under both backends, checks they agree bit-for-bit, and prints a timing
table with the speedup. Usage:

    python3 benchmarks/compare_backends.py [--sizes 100,200,400] [--pairs 3]
"""

import argparse
import sys

import numpy as np

from retime.bench import timed_value
from retime.dtw import HAVE_COMPILED, dtw_full, fastdtw, use_backend
from retime.generate import TemplateSpec, generate_template, warped_pair


def make_pairs(T, count):
    pairs = []
    for s in range(count):
        tpl = generate_template(TemplateSpec("trajectory3d", T, 3, seed=6000 + s))
        pairs.append(warped_pair(tpl, seed=60 + s))
    return pairs


def run(backend, pairs, radius):
    use_backend(backend)
    out = []
    for a, b in pairs:
        full, t_full = timed_value(lambda: dtw_full(a, b))
        fast, t_fast = timed_value(lambda: fastdtw(a, b, radius=radius))
        out.append((full, t_full, fast, t_fast))
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="100,200,400", help="comma-separated T values")
    parser.add_argument("--pairs", type=int, default=3, help="warped pairs per size")
    parser.add_argument("--radius", type=int, default=1, help="multiscale search radius")
    args = parser.parse_args(argv)

    if not HAVE_COMPILED:
        print("compiled kernel unavailable; nothing to compare", file=sys.stderr)
        return 1

    sizes = [int(s) for s in args.sizes.split(",")]
    header = f"{'T':>5} {'solver':>8} {'compiled':>10} {'python':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for T in sizes:
        pairs = make_pairs(T, args.pairs)
        compiled = run("compiled", pairs, args.radius)
        python = run("python", pairs, args.radius)
        use_backend("auto")

        for (cf, _, cq, _), (pf, _, pq, _) in zip(compiled, python):
            if cf.cost != pf.cost or not np.array_equal(cf.pairs, pf.pairs):
                print(f"T={T}: backends disagree on the exact solver", file=sys.stderr)
                return 1
            if cq.cost != pq.cost or not np.array_equal(cq.pairs, pq.pairs):
                print(f"T={T}: backends disagree on the multiscale solver", file=sys.stderr)
                return 1

        for label, idx in (("exact", 1), ("fastdtw", 3)):
            t_c = float(np.median([row[idx] for row in compiled]))
            t_p = float(np.median([row[idx] for row in python]))
            print(f"{T:>5} {label:>8} {t_c * 1e3:>8.2f}ms {t_p * 1e3:>8.2f}ms {t_p / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
