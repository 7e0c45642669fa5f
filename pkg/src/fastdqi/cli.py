"""Command-line front end.

Every command is deterministic given its arguments and ``--seed``; component
streams use ``derive_seed(master, label)``, the first 8 bytes (big endian) of
sha256("<master>:<label>"). Outputs embed the configuration that produced them.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import statistics
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import analytics, dqi_sim, opi, rsdecode, verify
from .errors import BudgetExceeded, DqiError, ShapeMismatch
from .field import make_field

SCHEMA = "fastdqi/1"

EXIT_OK = 0
EXIT_CONTRACT = 2
EXIT_BUDGET = 3
EXIT_IO = 4

DEFAULT_BENCH_PRIMES = (97, 257, 769, 3329, 12289, 40961, 65537)


def derive_seed(master: int, label: str) -> int:
    digest = hashlib.sha256(f"{master}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        raise FileNotFoundError(f"output directory does not exist: {path.parent}")
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, doc) -> None:
    _atomic_write(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def write_csv(path, header, rows, config) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _atomic_write(path, buf.getvalue())
    write_json(f"{path}.meta.json", {"schema": SCHEMA, "columns": list(header), "config": config})


def _config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _load(path):
    try:
        return opi.load_instance(path)
    except json.JSONDecodeError as exc:
        raise OSError(f"{path}: not valid JSON ({exc})") from exc


def cmd_gen(args):
    if args.profile == "canonical":
        profile = "canonical"
    else:
        profile = ("custom", args.n, args.r)
    inst = opi.random_instance(args.p, profile, derive_seed(args.seed, "gen"))
    text = json.dumps(opi.instance_to_json(inst)) + "\n"
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _weights(args, m, ell, rho):
    if args.weights == "optimal":
        w, _, _ = analytics.optimal_weights(m, ell, rho)
        return dqi_sim.explicit_weights(w)
    if args.q is not None:
        return dqi_sim.weights_from_q(m, ell, args.q, args.c)
    return dqi_sim.make_weights(m, ell, args.c)


def cmd_simulate(args):
    inst = _load(args.instance)
    lin = opi.reduce_to_maxlinsat(inst)
    ell = args.ell if args.ell is not None else dqi_sim.default_ell(lin)
    r = lin.r
    if r is None:
        raise ShapeMismatch("simulate needs sets of equal size")
    weights = _weights(args, lin.m, ell, r / lin.p)
    formula = dqi_sim.expected_objective_formula(lin, weights)
    phi3, final = dqi_sim.run_pipeline(lin, weights, args.budget_errors, args.budget_amps)
    statevector = dqi_sim.expected_objective_statevector(lin, final, args.budget_amps)
    doc = {
        "schema": SCHEMA,
        "config": _config(args),
        "m": lin.m,
        "n": lin.n,
        "p": lin.p,
        "r": r,
        "ell": ell,
        "weights": [float(v) for v in weights.w],
        "formula_expectation": formula,
        "statevector_expectation": statevector,
        "difference": abs(formula - statevector),
        "epsilon": weights.epsilon,
        "warnings": list(weights.warnings),
        "shots": args.shots,
        "seed": args.seed,
        "sample_mean": None,
        "sample_stderr": None,
    }
    rows = None
    if args.shots > 0:
        _, f = dqi_sim.sample_solutions(lin, final, args.shots, derive_seed(args.seed, "shots"))
        doc["sample_mean"] = float(np.mean(f))
        doc["sample_stderr"] = float(np.std(f, ddof=1) / math.sqrt(len(f))) if len(f) > 1 else None
        rows = [(i, int(v)) for i, v in enumerate(f)]
    if args.out:
        write_json(args.out, doc)
        if rows is not None:
            write_csv(_sidecar(args.out, "samples"), ("shot", "f"), rows, doc["config"])
    else:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _sidecar(path, tag):
    path = Path(path)
    return path.with_name(f"{path.stem}.{tag}.csv")


def cmd_baseline(args):
    inst = _load(args.instance)
    base = derive_seed(args.seed, "baseline")
    vals = [opi.truncation_heuristic(inst, (base + i) % 2**63)[1] for i in range(args.trials)]
    mean = statistics.fmean(vals)
    stderr = statistics.stdev(vals) / math.sqrt(len(vals)) if len(vals) > 1 else None
    r = int(inst.set_sizes[0])
    summary = {
        "schema": SCHEMA,
        "config": _config(args),
        "trials": args.trials,
        "mean": mean,
        "stderr": stderr,
        "expected": opi.heuristic_expectation(inst.n, inst.p, r),
        "mean_fraction": mean / inst.m,
    }
    rows = [(i, v) for i, v in enumerate(vals)]
    if args.out:
        write_csv(args.out, ("trial", "f"), rows, _config(args))
        write_json(Path(args.out).with_suffix(".summary.json"), summary)
    else:
        sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _radius(p, rule):
    if rule == "sixteenth":
        return max(1, (p - 1) // 16)
    if rule == "sqrt":
        return max(1, math.isqrt(p))
    return max(1, (p - 3) // 2)  # "max": largest radius with 2t <= p-2


def _time_decoder(decoder, code, syndromes, errors):
    times, failures = [], 0
    for s, y in zip(syndromes, errors):
        start = time.perf_counter()
        try:
            ok = np.array_equal(decoder(code, s), y)
        except DqiError:
            ok = False
        times.append(time.perf_counter() - start)
        failures += not ok
    return statistics.median(times), failures


def fit_exponent(ps, times):
    if len(ps) < 2:
        return None
    slope, _ = np.polyfit(np.log(ps), np.log(times), 1)
    return float(slope)


def decode_bench(primes, rule="sixteenth", trials=5, seed=0, naive_max_p=12289):
    rows = []
    for p in primes:
        F = make_field(p)
        t = _radius(p, rule)
        code = rsdecode.RsCode(F, 2 * t, t)
        rng = np.random.default_rng(derive_seed(seed, f"decode-bench:{p}"))
        errors = []
        for _ in range(trials):
            y = np.zeros(p - 1, dtype=np.int64)
            pos = rng.choice(p - 1, size=t, replace=False)
            y[pos] = rng.integers(1, p, size=t)
            errors.append(y)
        syndromes = [rsdecode.syndrome_from_error(code, y) for y in errors]
        rsdecode.decode_fast(code, syndromes[0])  # warm the transform plans
        fast, fast_fail = _time_decoder(rsdecode.decode_fast, code, syndromes, errors)
        naive = naive_fail = None
        if p <= naive_max_p:
            naive, naive_fail = _time_decoder(rsdecode.decode_naive, code, syndromes[:1], errors[:1])
        rows.append({"p": p, "t": t, "trials": trials, "fast_median_s": fast, "fast_failures": fast_fail,
                     "naive_median_s": naive, "naive_failures": naive_fail})
    ps = [r["p"] for r in rows]
    fit = {
        "fast_exponent": fit_exponent(ps, [r["fast_median_s"] for r in rows]),
        "naive_exponent": fit_exponent(
            [r["p"] for r in rows if r["naive_median_s"] is not None],
            [r["naive_median_s"] for r in rows if r["naive_median_s"] is not None],
        ),
    }
    common = [r for r in rows if r["naive_median_s"] is not None]
    fit["ratio_at_largest_common_p"] = (
        common[-1]["naive_median_s"] / common[-1]["fast_median_s"] if common else None)
    return rows, fit


def cmd_decode_bench(args):
    primes = sorted(args.primes)
    rows, fit = decode_bench(primes, args.t_rule, args.trials, args.seed, args.naive_max_p)
    header = ("p", "t", "trials", "fast_median_s", "fast_failures", "naive_median_s", "naive_failures")
    doc = {"schema": SCHEMA, "config": _config(args), "rows": rows, "fit": fit}
    if args.out:
        write_csv(args.out, header, [[r[h] for h in header] for r in rows], _config(args))
        write_json(Path(args.out).with_suffix(".fit.json"), doc)
    else:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    failed = any(r["fast_failures"] or r["naive_failures"] for r in rows)
    return EXIT_CONTRACT if failed else EXIT_OK


def analyze_rows(lambdas, rhos, m, c, lambda_star):
    rows = []
    for lam in lambdas:
        for rho in rhos:
            ell = int(round(lam * m))
            asym = analytics.asymptotic_ratio(lam, rho)
            spec = analytics.TridiagSpec.from_rho(m, ell, rho)
            eigen_upper = rho + math.sqrt(rho * (1 - rho)) * spec.eigenvalue_bound() / m
            lower = actual = None
            try:
                weights = dqi_sim.make_weights(m, ell, c)
                actual = analytics.expectation_from_weights(m, ell, rho, weights.w) / m
                lower = analytics.binomial_lower_bound(m, ell, rho, c, lambda_star).lower
            except DqiError:
                pass  # outside the proven regime: no lower bound
            rows.append((lam, rho, asym, eigen_upper, lower, actual))
    return rows


def cmd_analyze(args):
    header = ("lambda", "rho", "asymptotic", "eigen_upper", "binom_lower", "binom_actual")
    rows = analyze_rows(args.lambdas, args.rhos, args.m, args.c, args.lambda_star)
    out_rows = [["" if v is None else v for v in row] for row in rows]
    if args.out:
        write_csv(args.out, header, out_rows, _config(args))
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(out_rows)
    if args.profile_out:
        prof = analytics.weight_profile(args.profile_m, args.profile_ell, args.c)
        cols = ("k", "binomial_mass", "overshoot", "truncated_mass", "flat_mass")
        write_csv(args.profile_out, cols, [[row[k] for k in cols] for row in prof], _config(args))
    return EXIT_OK


def cmd_verify(args):
    report = verify.run(args.level, args.seed)
    report["schema"] = SCHEMA
    if args.out:
        write_json(args.out, report)
    else:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report["passed"] else 1


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument("--out", default=None, help="output path (stdout if omitted)")
    common.add_argument("--budget-amps", type=int, default=dqi_sim.DENSE_BUDGET,
                        help="largest dense state size")
    common.add_argument("--budget-errors", type=int, default=dqi_sim.ENUM_BUDGET,
                        help="largest number of enumerated errors")

    parser = argparse.ArgumentParser(prog="fastdqi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a random instance")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--profile", choices=("canonical", "custom"), default="canonical")
    g.add_argument("--n", type=int)
    g.add_argument("--r", type=int)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("simulate", parents=[common], help="simulate the pipeline on an instance")
    s.add_argument("instance")
    s.add_argument("--ell", type=int)
    s.add_argument("--c", type=float, default=0.01)
    s.add_argument("--q", type=float, help="binomial parameter, overrides the value derived from c")
    s.add_argument("--weights", choices=("binomial", "optimal"), default="binomial")
    s.add_argument("--shots", type=int, default=0)
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("baseline", parents=[common], help="run the truncation heuristic")
    b.add_argument("instance")
    b.add_argument("--trials", type=int, default=1000)
    b.set_defaults(func=cmd_baseline)

    d = sub.add_parser("decode-bench", parents=[common], help="time the two decoders")
    d.add_argument("--primes", type=_ints, default=list(DEFAULT_BENCH_PRIMES))
    d.add_argument("--t-rule", choices=("sixteenth", "sqrt", "max"), default="sixteenth")
    d.add_argument("--trials", type=int, default=5)
    d.add_argument("--naive-max-p", type=int, default=12289)
    d.set_defaults(func=cmd_decode_bench)

    a = sub.add_parser("analyze", parents=[common], help="tabulate bounds and weight profiles")
    a.add_argument("--lambdas", type=_floats, default=[0.05, 0.1, 0.25, 0.5])
    a.add_argument("--rhos", type=_floats, default=[0.1, 0.3, 0.5, 0.7])
    a.add_argument("--m", type=int, default=2000)
    a.add_argument("--c", type=float, default=0.01)
    a.add_argument("--lambda-star", type=float, default=0.05)
    a.add_argument("--profile-out", default=None, help="also write the weight profile CSV here")
    a.add_argument("--profile-m", type=int, default=500)
    a.add_argument("--profile-ell", type=int, default=200)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", parents=[common], help="run the claim-check battery")
    v.add_argument("--level", choices=verify.LEVELS, default="fast")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DqiError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
