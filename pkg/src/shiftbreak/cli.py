"""The `shiftbreak` experiment runner.

Subcommands:
 - recover:  plant a shift, run a recovery algorithm, report exact call counts
 - identity: run an identity test (known or unknown t)
 - lab:      sweep an exact counter over a parameter grid
 - bench:    compare oracle-call counts across algorithms and grid cells

Reports are emitted as JSON lines, CSV, or an aligned table.  With a fixed
seed every report is byte-reproducible; wall-clock timing is only added on
request (--timing) because it breaks reproducibility.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
import time

from . import bounds_lab as bl
from . import field_core as fc
from . import identity_test as it
from . import shift_recovery as sr
from .errors import (
    AlgorithmFailure,
    ConfigError,
    ShiftbreakError,
    Stalled,
    TooLarge,
    TooLargeForScan,
    TooSmall,
)
from .oracle import new_oracle

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEFECT = 3
EXIT_RESOURCE = 4

ALGORITHMS = (
    "interpolation",
    "zero_call_narrow",
    "smooth_narrow",
    "randomized",
    "large_e",
)


def _policy_from(args) -> sr.ProbePolicy:
    kwargs = {}
    if getattr(args, "epsilon", None) is not None:
        kwargs["epsilon"] = args.epsilon
    if getattr(args, "window_cap", None) is not None:
        kwargs["window_cap"] = args.window_cap
    return sr.ProbePolicy(**kwargs)


def _run_one_recovery(p, e, s, algorithm, seed, policy):
    ctx = fc.make_context(p)
    params = fc.make_params(ctx, e)
    oracle = new_oracle(ctx, params, s)
    trace = sr.RecoveryTrace()
    if algorithm == "interpolation":
        recovered = sr.interpolation_recover(oracle)
    elif algorithm == "zero_call_narrow":
        recovered = sr.recover_zero_call_narrow(oracle, policy, trace)
    elif algorithm == "smooth_narrow":
        recovered = sr.recover_smooth_narrow(oracle, policy, trace)
    elif algorithm == "randomized":
        from .root_solver import full_witness_set

        S0 = sr.initial_candidates_zero_call(oracle, full_witness_set(ctx, params))
        recovered = sr.recover_randomized(oracle, S0, seed, trace)
    elif algorithm == "large_e":
        recovered = sr.recover_large_e(oracle, policy, trace)
    else:
        raise ConfigError(f"unknown algorithm {algorithm!r}")
    if recovered != s:
        raise AlgorithmFailure(
            f"recovered {recovered} != planted {s} (p={p}, e={e}, {algorithm})"
        )
    return {
        "algorithm": algorithm,
        "p": p,
        "e": e,
        "s": s,
        "recovered": recovered,
        "oracle_calls": oracle.calls,
        "phase_breakdown": [list(r) for r in trace.rounds],
    }


def run_recover(args) -> list[dict]:
    p, e = args.p, args.e
    if p is None or e is None:
        raise ConfigError("recover requires --p and --e")
    algorithm = args.algorithm or "zero_call_narrow"
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}")
    policy = _policy_from(args)
    rng = random.Random(args.seed)
    rows = []
    started = time.perf_counter()
    for trial in range(args.trials):
        if args.s is not None:
            s = args.s
        else:
            s = rng.randrange(p)
        row = _run_one_recovery(p, e, s, algorithm, (args.seed or 0) + trial, policy)
        row["trial"] = trial
        if args.timing:
            row["wall_time"] = round(time.perf_counter() - started, 6)
        rows.append(row)
    return rows


def run_identity(args) -> list[dict]:
    p, e = args.p, args.e
    if p is None or e is None:
        raise ConfigError("identity requires --p and --e")
    ctx = fc.make_context(p)
    params = fc.make_params(ctx, e)
    mode = args.mode or "exact"
    policy = it.HPolicy(
        mode=mode,
        epsilon=args.epsilon if args.epsilon is not None else 0.05,
        c0=args.c0 if args.c0 is not None else 1.0,
        cap=args.window_cap,
    )
    rng = random.Random(args.seed)
    s = args.s if args.s is not None else rng.randrange(p)
    variant = "known_t" if args.t is not None else "unknown_t"
    t = args.t if args.t is not None else rng.randrange(p)
    h = it.choose_h(ctx, params, variant, policy)
    if variant == "known_t":
        oracle = new_oracle(ctx, params, s, forbidden=frozenset({(-t) % p}))
        verdict = it.test_known_t(oracle, t, policy)
        probes = oracle.calls
    else:
        o_s = new_oracle(ctx, params, s)
        o_t = new_oracle(ctx, params, t)
        verdict = it.test_unknown_t(o_s, o_t, policy)
        probes = o_s.calls + o_t.calls
    return [
        {
            "variant": variant,
            "p": p,
            "e": e,
            "verdict": verdict,
            "probes": probes,
            "h": h,
            "mode": mode,
            "ground_truth_equal": s == t,
        }
    ]


def _lab_row(lemma, cell):
    """Exact count plus the explicit-constant envelope for one grid cell."""
    if lemma == "coset_run":
        ctx = fc.make_context(cell["p"])
        count = bl.longest_coset_run(ctx, fc.make_params(ctx, cell["e"]))
        predicted = 4.0 * cell["e"] ** 0.25
    elif lemma == "hyperbola":
        count = bl.hyperbola_count(cell["p"], cell["u"], cell["v"], cell["H"])
        predicted = cell["H"] ** 2 / cell["p"] + 4.0 * math.sqrt(cell["H"]) + 4.0
    elif lemma == "energy":
        count = bl.multiplicative_energy_count(cell["p"], cell["a"], cell["H"])
        predicted = cell["H"] ** 4 / cell["p"] + 4.0 * cell["H"] ** 2 * math.log(
            cell["H"] + 2
        )
    elif lemma == "subgroup_shift":
        ctx = fc.make_context(cell["p"])
        shifts = [tuple(x) for x in cell["shifts"]]
        count = bl.subgroup_shift_intersection(
            ctx, fc.make_params(ctx, cell["e"]), shifts
        )
        m = len(shifts)
        predicted = 4.0 * cell["e"] ** ((m + 1) / (2 * m + 1))
    elif lemma == "product_J":
        ctx = fc.make_context(cell["p"])
        count = bl.product_count_J(ctx, cell["nu"], cell["lam"], cell["s"], cell["h"])
        predicted = None  # existential constant; ratio reported empirically
    elif lemma == "product_set":
        ctx = fc.make_context(cell["p"])
        count = bl.product_set_size(
            ctx, cell["nu"], cell["s"], cell.get("t"), cell["h"]
        )
        predicted = float(cell["h"] ** cell["nu"])
    elif lemma == "psi":
        count = bl.psi_count(cell["x"], cell["y"])
        u = math.log(cell["x"]) / math.log(cell["y"]) if cell["y"] > 1 else 1.0
        predicted = cell["x"] * u ** (-u) if u > 0 else float(cell["x"])
    elif lemma == "smooth_subgroup":
        ctx = fc.make_context(cell["p"])
        count = bl.smooth_subgroup_order(ctx, cell["y"])
        predicted = None
    else:
        raise ConfigError(f"unknown lemma {lemma!r}")
    row = {"lemma_id": lemma}
    row.update(cell)
    row["exact_count"] = count
    row["predicted"] = predicted
    row["ratio"] = (count / predicted) if predicted else None
    return row


def run_lab(args) -> list[dict]:
    if not args.lemma:
        raise ConfigError("lab requires --lemma")
    cells = _load_grid(args.grid) if args.grid else _default_lab_grid(args)
    rows = []
    for cell in cells:
        try:
            rows.append(_lab_row(args.lemma, cell))
        except (TooLarge, TooSmall) as exc:
            row = {"lemma_id": args.lemma}
            row.update(cell)
            row["skipped"] = str(exc)
            rows.append(row)
    return rows


def _default_lab_grid(args):
    if args.p is None:
        raise ConfigError("lab requires --grid or inline --p/--e parameters")
    cell = {"p": args.p}
    if args.e is not None:
        cell["e"] = args.e
    return [cell]


def _load_grid(path):
    try:
        with open(path) as f:
            grid = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read grid file {path}: {exc}") from exc
    if not isinstance(grid, list):
        raise ConfigError("grid file must hold a JSON list of cells")
    return grid


def run_bench(args) -> list[dict]:
    cells = _load_grid(args.grid) if args.grid else None
    if cells is None:
        if args.p is None or args.e is None:
            raise ConfigError("bench requires --grid or --p and --e")
        cells = [{"p": args.p, "e": args.e}]
    algorithms = args.algorithms or ["interpolation", "zero_call_narrow", "randomized"]
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {a!r}")
    if args.trials < 1:
        raise ConfigError("bench requires trials >= 1")
    policy = _policy_from(args)
    rows = []
    for cell in cells:
        p, e = cell["p"], cell["e"]
        for algorithm in algorithms:
            rng = random.Random((args.seed or 0) ^ (p * 1000003 + e))
            calls = []
            started = time.perf_counter()
            for trial in range(args.trials):
                s = rng.randrange(p)
                row = _run_one_recovery(
                    p, e, s, algorithm, (args.seed or 0) + trial, policy
                )
                calls.append(row["oracle_calls"])
            out = {
                "p": p,
                "e": e,
                "algorithm": algorithm,
                "trials": args.trials,
                "mean_calls": round(sum(calls) / len(calls), 4),
                "max_calls": max(calls),
                "interpolation_baseline": e + 1,
            }
            if args.timing:
                out["wall_time"] = round(time.perf_counter() - started, 6)
            rows.append(out)
    return rows


def _emit(rows, fmt, out):
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row) + "\n")
    elif fmt == "csv":
        keys: list[str] = []
        for row in rows:
            for k in row:
                if k not in keys:
                    keys.append(k)
        writer = csv.DictWriter(out, fieldnames=keys)
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()}
            )
    else:  # table
        if not rows:
            return
        keys = []
        for row in rows:
            for k in row:
                if k not in keys:
                    keys.append(k)
        cells = [[str(row.get(k, "")) for k in keys] for row in rows]
        widths = [
            max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)
        ]
        out.write("  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip() + "\n")
        for c in cells:
            out.write("  ".join(v.ljust(w) for v, w in zip(c, widths)).rstrip() + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftbreak")
    parser.add_argument("--config", help="JSON file of default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int)
        sp.add_argument("--e", type=int)
        sp.add_argument("--s", type=int)
        sp.add_argument("--t", type=int)
        sp.add_argument("--algorithm")
        sp.add_argument("--algorithms", nargs="*")
        sp.add_argument("--epsilon", type=float)
        sp.add_argument("--c0", type=float)
        sp.add_argument("--window-cap", dest="window_cap", type=int)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=1)
        sp.add_argument("--output", choices=("json", "csv", "table"), default="json")
        sp.add_argument("--grid")
        sp.add_argument("--mode", choices=("exact", "theoretical"))
        sp.add_argument("--lemma")
        sp.add_argument("--timing", action="store_true")

    for name in ("recover", "identity", "lab", "bench"):
        common(sub.add_parser(name))
    return parser


def _apply_config_defaults(args, parser):
    if not args.config:
        return args
    try:
        with open(args.config) as f:
            defaults = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    for key, value in defaults.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise ConfigError(f"unknown config key {key!r}")
        if parser.get_default(key) == getattr(args, key):
            setattr(args, key, value)  # flags given on the command line win
    return args


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        args = _apply_config_defaults(args, parser)
        runner = {
            "recover": run_recover,
            "identity": run_identity,
            "lab": run_lab,
            "bench": run_bench,
        }[args.command]
        rows = runner(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AlgorithmFailure as exc:
        print(f"algorithm defect: {exc}", file=sys.stderr)
        return EXIT_DEFECT
    except (TooLarge, TooLargeForScan, TooSmall, Stalled) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ShiftbreakError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(rows, args.output, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
