"""Command-line frontend: CSV in/out around the library.

Commands: smooth, gridsearch, generate, stability, bench.  Signals travel as
single-column CSV (one optional header line tolerated on input), segmentations
as two-column "left,right" CSV, summaries as key=value lines on stdout.
Floats are written with 17 significant digits, which round-trips doubles
exactly.
"""
from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from .core import ModelParams, Partition
from .errors import init_state, extend, precompute_poly, precompute_spline
from .metrics import rand_index, rel_l2_error
from .reference import eps_moments
from .signals import KINDS, add_noise, generate, random_pw_poly, true_partition
from .solver import solve

DEFAULT_SEED = 42
DEFAULT_BETA_GRID = "0.025:25:0.025,inf"
DEFAULT_GAMMA_GRID = "0.001:1:0.001"


class CliError(Exception):
    pass


def _fmt(x: float) -> str:
    return "%.17g" % (x,)


def read_signal_csv(path: str) -> np.ndarray:
    values = []
    try:
        fh = open(path)
    except OSError as exc:
        raise CliError("cannot read %s: %s" % (path, exc))
    with fh:
        for ln, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                if ln == 1 and not values:
                    continue  # optional header line
                raise CliError("%s: line %d is not a number: %r" % (path, ln, text))
    if not values:
        raise CliError("%s: no numeric samples found" % (path,))
    return np.array(values)


def write_signal_csv(path: str, values) -> None:
    with open(path, "w") as fh:
        for v in values:
            fh.write(_fmt(float(v)) + "\n")


def read_segments_csv(path: str) -> Partition:
    rows = []
    try:
        fh = open(path)
    except OSError as exc:
        raise CliError("cannot read %s: %s" % (path, exc))
    with fh:
        for ln, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            parts = text.split(",")
            try:
                left, right = int(parts[0]), int(parts[1])
            except (ValueError, IndexError):
                if ln == 1 and not rows:
                    continue
                raise CliError("%s: line %d is not a 'left,right' pair: %r" % (path, ln, text))
            rows.append((left, right))
    if not rows:
        raise CliError("%s: no segments found" % (path,))
    try:
        return Partition(rows)
    except ValueError as exc:
        raise CliError("%s: %s" % (path, exc))


def write_segments_csv(path: str, part: Partition) -> None:
    with open(path, "w") as fh:
        for seg in part:
            fh.write("%d,%d\n" % (seg.left, seg.right))


def parse_beta(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        v = float(text)
    except ValueError:
        raise CliError("invalid beta %r (number or 'inf')" % (text,))
    return v


def parse_grid(text: str, name: str) -> list:
    """Comma list of numbers, 'inf', and start:stop:step ranges (inclusive)."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if item.lower() in ("inf", "infinity"):
            out.append(math.inf)
            continue
        if ":" in item:
            pieces = item.split(":")
            if len(pieces) != 3:
                raise CliError("bad %s grid item %r (want start:stop:step)" % (name, item))
            try:
                start, stop, step = (float(p) for p in pieces)
            except ValueError:
                raise CliError("bad %s grid item %r" % (name, item))
            if step <= 0 or stop < start:
                raise CliError("bad %s grid range %r" % (name, item))
            npts = int(math.floor((stop - start) / step + 1e-9)) + 1
            out.extend(start + i * step for i in range(npts))
        else:
            try:
                out.append(float(item))
            except ValueError:
                raise CliError("bad %s grid item %r" % (name, item))
    if not out:
        raise CliError("empty %s grid" % (name,))
    return out


def _table_for(k: int, beta: float, n: int):
    if math.isinf(beta):
        return precompute_poly(k, n)
    return precompute_spline(k, beta, n)


def run_grid_search(f, truth, k, betas, gammas, objective, true_parts=None):
    """Evaluate the (beta, gamma) grid; return the best record.

    objective 'rel_l2' minimizes the relative l2 error against the clean
    signal, 'rand' maximizes the Rand index against a known segmentation.
    Ties go to smaller gamma, then smaller beta.  Evaluation is beta-major
    so each rotation table is built once.
    """
    if objective not in ("rel_l2", "rand"):
        raise CliError("objective must be rel_l2 or rand, got %r" % (objective,))
    if objective == "rand" and true_parts is None:
        raise CliError("objective rand needs a --true-segments file")
    n = len(f)
    best = None
    count = 0
    for beta in betas:
        table = _table_for(k, beta, n)
        for gamma in gammas:
            res = solve(f, ModelParams(k=k, beta=beta, gamma=gamma), table=table)
            rel = rel_l2_error(res.estimate, truth)
            if true_parts is not None and n >= 2:
                rind = rand_index(res.partition, true_parts)
            else:
                rind = float("nan")
            score = rel if objective == "rel_l2" else -rind
            key = (score, gamma, beta)
            if best is None or key < best[0]:
                best = (key, {"beta": beta, "gamma": gamma, "rel_l2": rel, "rand": rind})
            count += 1
    record = best[1]
    record["evaluations"] = count
    return record


def stability_signal(k: int, n: int) -> np.ndarray:
    """Degree-(k-1) polynomial test input: i^(k-1) / n^(k-2) over i = 1..n.

    At k=3, n=100 this is the parabola i^2/100.
    """
    if k == 1:
        return np.ones(n)
    i = np.arange(1, n + 1, dtype=np.float64)
    return i ** (k - 1) / float(n) ** (k - 2)


def stability_errors(f, k: int, mode: str, beta: float):
    """Prefix errors E[1:r] and suffix errors E[l:n] under one computation path."""
    n = len(f)
    if mode == "moments":
        prefix = np.array([eps_moments(f, 1, r, k) for r in range(1, n + 1)])
        suffix = np.array([eps_moments(f, l, n, k) for l in range(1, n + 1)])
        return prefix, suffix
    table = precompute_poly(k, n) if mode == "poly" else precompute_spline(k, beta, n)
    prefix = np.zeros(n)
    st = init_state(1, f[0], table)
    for r in range(2, n + 1):
        st = extend(st, f[r - 1], table)
        prefix[r - 1] = st.eps
    suffix = np.zeros(n)
    for l in range(1, n + 1):
        st = init_state(l, f[l - 1], table)
        for r in range(l + 1, n + 1):
            st = extend(st, f[r - 1], table)
        suffix[l - 1] = st.eps
    return prefix, suffix


def _instance_seed(seed: int, n: int, rep: int) -> int:
    return int(np.random.SeedSequence([seed, n, rep]).generate_state(1)[0])


def run_bench(scenario, sizes, k, beta, gamma, repetitions, seed):
    """Mean solve time and error-update count per size; returns list of rows."""
    rows = []
    for n in sorted(sizes):
        table = _table_for(k, beta, n)
        params = ModelParams(k=k, beta=beta, gamma=gamma)
        secs = []
        upds = []
        for rep in range(repetitions):
            s = _instance_seed(seed, n, rep)
            if scenario == "pw_poly":
                clean, _ = random_pw_poly(n, 0.01, k, s)
            else:
                clean = generate("pw_smooth", n)
            f = add_noise(clean, 0.1, s + 1)
            t0 = time.perf_counter()
            res = solve(f, params, table=table)
            secs.append(time.perf_counter() - t0)
            upds.append(res.num_error_updates)
        rows.append((n, float(np.mean(secs)), float(np.mean(upds))))
    return rows


def _out_stream(path):
    return open(path, "w") if path else sys.stdout


def cmd_smooth(args) -> int:
    f = read_signal_csv(args.input)
    beta = math.inf if args.potts else parse_beta(args.beta) if args.beta else None
    if beta is None:
        raise CliError("pass --beta VALUE or --potts")
    params = ModelParams(k=args.k, beta=beta, gamma=args.gamma)
    res = solve(f, params, pruning=args.pruning)
    est_path = args.estimate_out or args.input + ".estimate.csv"
    seg_path = args.segments_out or args.input + ".estimate.segments.csv"
    write_signal_csv(est_path, res.estimate)
    write_segments_csv(seg_path, res.partition)
    print("energy=%s" % _fmt(res.energy))
    print("segments=%d" % len(res.partition))
    print("error_updates=%d" % res.num_error_updates)
    return 0


def cmd_gridsearch(args) -> int:
    f = read_signal_csv(args.input)
    truth = read_signal_csv(args.ground_truth)
    if len(truth) != len(f):
        raise CliError("input and ground truth have different lengths: %d vs %d"
                       % (len(f), len(truth)))
    true_parts = read_segments_csv(args.true_segments) if args.true_segments else None
    if true_parts is not None and true_parts.n != len(f):
        raise CliError("true segments cover 1..%d but signal has %d samples"
                       % (true_parts.n, len(f)))
    betas = parse_grid(args.beta_grid, "beta")
    gammas = parse_grid(args.gamma_grid, "gamma")
    rec = run_grid_search(f, truth, args.k, betas, gammas, args.objective, true_parts)
    print("objective=%s" % args.objective)
    print("evaluations=%d" % rec["evaluations"])
    print("best_beta=%s" % ("inf" if math.isinf(rec["beta"]) else _fmt(rec["beta"])))
    print("best_gamma=%s" % _fmt(rec["gamma"]))
    print("rel_l2=%s" % _fmt(rec["rel_l2"]))
    print("rand=%s" % _fmt(rec["rand"]))
    return 0


def cmd_generate(args) -> int:
    print("seed=%d" % args.seed)
    if args.kind == "pw_poly":
        clean, parts = random_pw_poly(args.n, args.p, args.k, args.seed)
    else:
        clean = generate(args.kind, args.n)
        parts = true_partition(args.kind, args.n)
    noisy = add_noise(clean, args.eta, args.seed + 1) if args.eta > 0 else clean.copy()
    clean_path = args.clean_out or args.output + ".clean.csv"
    seg_path = args.segments_out or args.output + ".segments.csv"
    write_signal_csv(args.output, noisy)
    write_signal_csv(clean_path, clean)
    write_segments_csv(seg_path, parts)
    print("kind=%s" % args.kind)
    print("n=%d" % args.n)
    print("eta=%s" % _fmt(args.eta))
    print("segments=%d" % len(parts))
    return 0


def cmd_stability(args) -> int:
    if args.mode == "moments" and args.k > 4:
        raise CliError("moments mode supports k <= 4")
    f = stability_signal(args.k, args.n)
    prefix, suffix = stability_errors(f, args.k, args.mode, args.beta)
    sq_norm = float(f @ f)
    out = _out_stream(args.output)
    try:
        out.write("index,prefix_error,suffix_error\n")
        for i in range(args.n):
            out.write("%d,%s,%s\n" % (i + 1, _fmt(prefix[i]), _fmt(suffix[i])))
    finally:
        if out is not sys.stdout:
            out.close()
    print("mode=%s" % args.mode)
    print("k=%d" % args.k)
    print("n=%d" % args.n)
    print("signal_sq_norm=%s" % _fmt(sq_norm))
    print("max_abs_prefix=%s" % _fmt(float(np.nanmax(np.abs(prefix)))))
    print("max_abs_suffix=%s" % _fmt(float(np.nanmax(np.abs(suffix)))))
    return 0


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise CliError("bad --sizes %r (comma-separated integers)" % (args.sizes,))
    if not sizes or any(s < 2 for s in sizes):
        raise CliError("sizes must be integers >= 2")
    beta = math.inf if args.potts else parse_beta(args.beta)
    if args.gamma is None:
        args.gamma = 0.05 if args.scenario == "pw_poly" else 0.5
    print("seed=%d" % args.seed)
    print("scenario=%s" % args.scenario)
    print("k=%d" % args.k)
    print("beta=%s" % ("inf" if math.isinf(beta) else _fmt(beta)))
    print("gamma=%s" % _fmt(args.gamma))
    print("repetitions=%d" % args.repetitions)
    rows = run_bench(args.scenario, sizes, args.k, beta, args.gamma,
                     args.repetitions, args.seed)
    out = _out_stream(args.output)
    try:
        out.write("n,mean_seconds,mean_error_updates\n")
        for n, secs, upd in rows:
            out.write("%d,%s,%s\n" % (n, _fmt(secs), _fmt(upd)))
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="segsmooth",
        description="Piecewise-smooth signal estimation with automatic segmentation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("smooth", help="solve one signal and write estimate + segments")
    p.add_argument("input", help="single-column CSV signal")
    p.add_argument("--k", type=int, required=True, help="smoothness order")
    p.add_argument("--beta", help="elasticity weight (number or 'inf')")
    p.add_argument("--potts", action="store_true", help="shorthand for --beta inf")
    p.add_argument("--gamma", type=float, required=True, help="jump penalty")
    p.add_argument("--pruning", choices=("both", "amp_only", "kf_only", "none"),
                   default="both")
    p.add_argument("--estimate-out", help="estimate CSV (default INPUT.estimate.csv)")
    p.add_argument("--segments-out",
                   help="segments CSV (default INPUT.estimate.segments.csv)")
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("gridsearch", help="search (beta, gamma) against a ground truth")
    p.add_argument("input", help="noisy signal CSV")
    p.add_argument("--ground-truth", required=True, help="clean signal CSV")
    p.add_argument("--true-segments", help="ground-truth segments CSV (enables rand)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta-grid", default=DEFAULT_BETA_GRID,
                   help="comma list / start:stop:step ranges / inf (default: %(default)s)")
    p.add_argument("--gamma-grid", default=DEFAULT_GAMMA_GRID,
                   help="same syntax as --beta-grid (default: %(default)s)")
    p.add_argument("--objective", choices=("rel_l2", "rand"), default="rel_l2")
    p.set_defaults(func=cmd_gridsearch)

    p = sub.add_parser("generate", help="write a test signal (clean, noisy, segments)")
    p.add_argument("output", help="noisy signal CSV path")
    p.add_argument("--kind", choices=KINDS + ("pw_poly",), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eta", type=float, default=0.0, help="noise level (default 0)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--p", type=float, default=0.01, help="jump probability (pw_poly)")
    p.add_argument("--k", type=int, default=2, help="polynomial order (pw_poly)")
    p.add_argument("--clean-out", help="clean CSV (default OUTPUT.clean.csv)")
    p.add_argument("--segments-out", help="segments CSV (default OUTPUT.segments.csv)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("stability", help="error tables for polynomial input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--mode", choices=("spline", "poly", "moments"), required=True)
    p.add_argument("--beta", type=float, default=1.0, help="spline mode weight")
    p.add_argument("--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("bench", help="runtime / update-count scaling table")
    p.add_argument("--scenario", choices=("pw_poly", "fixed_jumps"), required=True)
    p.add_argument("--sizes", required=True, help="comma-separated signal lengths")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--beta", default="inf", help="number or 'inf' (default inf)")
    p.add_argument("--potts", action="store_true", help="shorthand for --beta inf")
    p.add_argument("--gamma", type=float, default=None,
                   help="jump penalty (default 0.05 for pw_poly, 0.5 for fixed_jumps)")
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
