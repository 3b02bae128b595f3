"""Time the compiled and pure-Python kernels on the same graphs.

    python3 benchmarks/bench_backends.py --n 10000,40000 --k 3,8 --repeat 3

Both backends draw the same random numbers, so each pair of runs also
checks that the action logs agree.
"""
import argparse
import statistics
import sys

from rcmatch import _backend
from rcmatch.genmodel import random_regular
from rcmatch.pipeline import reduce_construct
from rcmatch.rng import stream


def _ints(text):
    return [int(x) for x in text.split(",")]


def bench(n, k, repeat, seed=0):
    g = random_regular(n, k, stream(seed, n, k))
    out = {}
    logs = {}
    for backend in _backend.available():
        times = []
        for r in range(repeat):
            res = reduce_construct(g, stream(seed, n, k, r), backend=backend)
            times.append(res.seconds)
            if r == 0:
                logs[backend] = res.log
        out[backend] = statistics.median(times)
    same = all(logs["python"] == v for v in logs.values())
    return out, same


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=_ints, default=[10000, 40000])
    p.add_argument("--k", type=_ints, default=[3, 8])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if "compiled" not in _backend.available():
        print("compiled extension not built; timing the Python kernels only", file=sys.stderr)
    print(f"{'n':>8} {'k':>3} {'python s':>10} {'compiled s':>11} {'speedup':>8}  logs")
    for n in args.n:
        for k in args.k:
            t, same = bench(n, k, args.repeat)
            py, c = t.get("python"), t.get("compiled")
            speed = f"{py / c:8.1f}" if c else "       -"
            cs = f"{c:11.4f}" if c else "          -"
            print(f"{n:>8} {k:>3} {py:10.4f} {cs} {speed}  {'equal' if same else 'DIFFER'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
