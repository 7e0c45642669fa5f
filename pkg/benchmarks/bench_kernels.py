"""Compare the compiled kernels with the numpy fallback.

Each kernel is timed on both backends with identical inputs; outputs are
compared before timing so a speedup is never reported for a wrong answer.

    python benchmarks/bench_kernels.py [--repeat N] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

import numpy as np

from fastdqi import kernels
from fastdqi.field import make_field


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times), statistics.median(times)


def _objects(result):
    if isinstance(result, tuple):
        return tuple(np.asarray(v, dtype=object) for v in result)
    return (np.asarray(result, dtype=object),)


def cases(rng):
    p = 65537
    F = make_field(p)
    a = rng.integers(0, p, size=2000)
    b = rng.integers(0, p, size=2000)
    den = rng.integers(1, p, size=500)
    x = rng.integers(0, p, size=(512, 2, 64))
    tw = rng.integers(1, p, size=(2, 64))
    tw[0] = 1
    big = 2_305_843_009_213_693_951
    small_a, small_b = rng.integers(0, p, size=(2, 1_000_000))
    big_a, big_b = rng.integers(0, big, size=(2, 100_000))
    return {
        "mulmod (1e6, p=65537)": lambda k: k.mulmod(small_a, small_b, p),
        "mulmod (1e5, p~2^61)": lambda k: k.mulmod(big_a, big_b, big),
        "poly_mul 2000x2000": lambda k: k.poly_mul(a, b, p),
        "poly_divmod 2000/500": lambda k: k.poly_divmod(a, den, p),
        "series_div 2000 terms": lambda k: k.series_div(a, den, 2000, p),
        "dft order 1024": lambda k: k.dft(a[:1024], F.root_of_order(1024), p),
        "cyclic_conv 1024": lambda k: k.cyclic_conv(a[:1024], b[:1024], p),
        "butterfly radix 2": lambda k: k.butterfly_pass(x, 2, 64, p - 1, tw, p),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is available", file=sys.stderr)
    rows = []
    for name, call in cases(np.random.default_rng(1)).items():
        outs = {b: _objects(call(m)) for b, m in backends.items()}
        ref = outs["python"]
        for b, out in outs.items():
            if not all(np.array_equal(u, v) for u, v in zip(ref, out)):
                raise SystemExit(f"{name}: backend {b} disagrees with the fallback")
        timing = {b: best_time(lambda m=m: call(m), args.repeat) for b, m in backends.items()}
        row = {"kernel": name, **{f"{b}_s": t[0] for b, t in timing.items()}}
        if "cython" in timing:
            row["speedup"] = timing["python"][0] / timing["cython"][0]
        rows.append(row)

    width = max(len(r["kernel"]) for r in rows)
    print(f"{'kernel':<{width}}  {'python':>10}  {'cython':>10}  speedup")
    for r in rows:
        cy = r.get("cython_s")
        print(f"{r['kernel']:<{width}}  {r['python_s']:10.5f}  "
              f"{cy if cy is None else f'{cy:10.5f}'}  {r.get('speedup', float('nan')):7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"backends": sorted(backends), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
