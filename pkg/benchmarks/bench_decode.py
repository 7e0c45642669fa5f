"""Decoder scaling benchmark.

Times the fast and reference decoders over primes with smooth p - 1, fits
log-log slopes and checks the fast path grows below p^1.5 and beats the
reference by more than 10x at the largest prime both decoders run on.

    python benchmarks/bench_decode.py [--trials N] [--naive-max-p P] [--out table.csv]
"""

from __future__ import annotations

import argparse
import sys

from fastdqi import kernels
from fastdqi.cli import DEFAULT_BENCH_PRIMES, decode_bench, fit_exponent, write_csv


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", default=",".join(map(str, DEFAULT_BENCH_PRIMES)))
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--naive-max-p", type=int, default=12289)
    ap.add_argument("--t-rule", default="sixteenth", choices=("sixteenth", "sqrt", "max"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    primes = sorted(int(v) for v in args.primes.split(","))
    rows, fit = decode_bench(primes, args.t_rule, args.trials, args.seed, args.naive_max_p)
    print(f"backend: {kernels.BACKEND}")
    print(f"{'p':>7} {'t':>6} {'fast s':>10} {'naive s':>10} {'ratio':>7}")
    for r in rows:
        naive = r["naive_median_s"]
        ratio = f"{naive / r['fast_median_s']:7.1f}" if naive else "      -"
        naive = f"{naive:10.4f}" if naive else "         -"
        print(f"{r['p']:>7} {r['t']:>6} {r['fast_median_s']:10.4f} {naive} {ratio}")

    # the smallest primes are dominated by fixed overhead; also fit the upper half
    upper = [r for r in rows if r["p"] >= 769]
    tail_fast = fit_exponent([r["p"] for r in upper], [r["fast_median_s"] for r in upper])
    both = [r for r in upper if r["naive_median_s"]]
    tail_naive = fit_exponent([r["p"] for r in both], [r["naive_median_s"] for r in both])
    print(f"fast exponent {fit['fast_exponent']:.2f} (p >= 769: {tail_fast:.2f})")
    if fit["naive_exponent"] is not None:
        print(f"naive exponent {fit['naive_exponent']:.2f} (p >= 769: {tail_naive:.2f})")
        print(f"naive/fast at largest common p: {fit['ratio_at_largest_common_p']:.1f}x")

    if args.out:
        header = ("p", "t", "trials", "fast_median_s", "fast_failures", "naive_median_s", "naive_failures")
        write_csv(args.out, header, [[r[h] for h in header] for r in rows], vars(args))

    failures = sum(r["fast_failures"] + (r["naive_failures"] or 0) for r in rows)
    ok = (failures == 0 and fit["fast_exponent"] < 1.5
          and (fit["ratio_at_largest_common_p"] or 0) > 10)
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
