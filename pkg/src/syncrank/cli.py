"""Command-line front end.

Subcommands: simulate (one cell of trials), heatmap (n x SNR sweep),
c0-sweep (n x threshold-constant sweep), rank (user-supplied comparison
CSV), instance (single-run deep dive with trace), certify (dual
certificate for one synthetic instance).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict

from .certificate import verify_certificate
from .harness import (
    ExperimentGrid,
    aggregate_cells,
    c0_sweep,
    default_c0_grid,
    default_heatmap_grid,
    derive_seed,
    heatmap_sweep,
    instance_report,
    rank_csv,
    record_row,
    run_trial,
    run_trial_detailed,
    write_cells_csv,
    write_trials_csv,
    TRIALS_CSV_COLUMNS,
)
from .model import sigma_from_c0, sigma_from_snr_db

__all__ = ["main", "build_parser"]


def _add_noise_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--snr-db", type=float, help="SNR in dB; sigma = 10^(-dB/10)")
    parser.add_argument("--sigma", type=float, help="noise level directly")
    parser.add_argument("--c0", type=float,
                        help="threshold constant; sigma = c0 sqrt(n / ln n)")


def _add_gpm_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-iter", type=int, default=None)
    parser.add_argument("--step-tol", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syncrank",
        description="Ranking from noisy pairwise comparisons by phase synchronization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run trials at a single (n, noise) cell")
    p.add_argument("--n", type=int, required=True)
    _add_noise_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--certify", action="store_true")
    _add_gpm_flags(p)
    p.add_argument("--out", help="directory for trials.<format>; default stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    for name, axis_flag in (("heatmap", "--snr-db"), ("c0-sweep", "--c0")):
        p = sub.add_parser(name, help=f"sweep n x {axis_flag.lstrip('-')} cells")
        p.add_argument("--n", type=int, nargs="+", help="item counts (grid axis)")
        p.add_argument(axis_flag, type=float, nargs="+", help="noise axis values")
        p.add_argument("--trials", type=int, help="trials per cell")
        p.add_argument("--seed", type=int, help="base seed")
        p.add_argument("--certify", action="store_true", default=None)
        _add_gpm_flags(p)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--config", help="JSON file mirroring the grid; flags override")
        p.add_argument("--out", required=True, help="directory for trials.csv + cells.csv")

    p = sub.add_parser("rank", help="rank items from an i,j,value comparison CSV")
    p.add_argument("input", help="comparison CSV path")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--certify", action="store_true")
    _add_gpm_flags(p)
    p.add_argument("--out", help="directory for report.json; default stdout")

    p = sub.add_parser("instance", help="single synthetic run with full trace")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--snr-db", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--certify", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", help="directory for report.json + trace.csv; default stdout")

    p = sub.add_parser("certify", help="dual certificate for one synthetic instance")
    p.add_argument("--n", type=int, required=True)
    _add_noise_flags(p)
    p.add_argument("--seed", type=int, default=0)
    _add_gpm_flags(p)
    p.add_argument("--out", help="directory for certificate.json; default stdout")

    return parser


def _resolve_sigma(args, n: int) -> tuple:
    """(sigma, snr_db, c0) from exactly one of the three noise flags."""
    given = [name for name in ("sigma", "snr_db", "c0")
             if getattr(args, name) is not None]
    if len(given) != 1:
        raise ValueError("exactly one of --sigma, --snr-db, --c0 is required")
    if args.sigma is not None:
        if args.sigma < 0:
            raise ValueError("--sigma must be nonnegative")
        return args.sigma, None, None
    if args.snr_db is not None:
        return sigma_from_snr_db(args.snr_db), args.snr_db, None
    return sigma_from_c0(args.c0, n), None, args.c0


def _trials_json(records: list) -> str:
    return json.dumps([asdict(rec) for rec in records], indent=2)


def _trials_csv_text(records: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRIALS_CSV_COLUMNS)
    for rec in records:
        writer.writerow(record_row(rec))
    return buf.getvalue()


def _emit(text: str, out_dir, filename: str) -> None:
    if out_dir is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, filename)
    with open(path, "w") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")
    print(f"wrote {path}")


def _cmd_simulate(args) -> int:
    sigma, snr_db, c0 = _resolve_sigma(args, args.n)
    if args.trials < 1:
        raise ValueError("--trials must be at least 1")
    records = []
    for trial in range(args.trials):
        seed = derive_seed(args.seed, 0, trial)
        records.append(run_trial(args.n, sigma, seed, snr_db=snr_db, c0=c0,
                                 trial=trial, certify=args.certify,
                                 max_iter=args.max_iter, step_tol=args.step_tol))
    if args.format == "json":
        _emit(_trials_json(records), args.out, "trials.json")
    else:
        _emit(_trials_csv_text(records), args.out, "trials.csv")
    return 0


_GRID_KEYS = ("n_values", "snr_db_values", "c0_values", "trials_per_cell",
              "base_seed", "max_iter", "step_tol", "certify")


def _build_grid(args, axis: str) -> ExperimentGrid:
    default = default_heatmap_grid() if axis == "snr_db_values" else default_c0_grid()
    params = {key: getattr(default, key) for key in _GRID_KEYS}
    if args.config is not None:
        with open(args.config) as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(_GRID_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        params.update(loaded)
    overrides = {
        "n_values": args.n,
        axis: getattr(args, axis.removesuffix("_values")),
        "trials_per_cell": args.trials,
        "base_seed": args.seed,
        "max_iter": args.max_iter,
        "step_tol": args.step_tol,
        "certify": args.certify,
    }
    for key, value in overrides.items():
        if value is not None:
            params[key] = value
    other_axis = "c0_values" if axis == "snr_db_values" else "snr_db_values"
    params[other_axis] = None
    return ExperimentGrid(**params)


def _cmd_sweep(args, axis: str) -> int:
    grid = _build_grid(args, axis)
    sweep = heatmap_sweep if axis == "snr_db_values" else c0_sweep
    records = sweep(grid, workers=args.workers, out_dir=args.out)
    cells = aggregate_cells(records)
    taus = [rec.tau for rec in records if rec.tau is not None]
    mean_tau = sum(taus) / len(taus) if taus else float("nan")
    print(f"{len(records)} trials across {len(cells)} cells -> "
          f"{os.path.join(args.out, 'trials.csv')} (mean tau {mean_tau:.4f})")
    return 0


def _cmd_rank(args) -> int:
    report = rank_csv(args.input, args.n, seed=args.seed, certify=args.certify,
                      max_iter=args.max_iter, step_tol=args.step_tol)
    _emit(json.dumps(report, indent=2), args.out, "report.json")
    return 0


def _trace_csv_text(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "step", "dist_to_truth", "min_modulus"])
    for row in rows:
        dist = "" if row["dist_to_truth"] is None else repr(row["dist_to_truth"])
        writer.writerow([row["t"], repr(row["step"]), dist, repr(row["min_modulus"])])
    return buf.getvalue()


def _cmd_instance(args) -> int:
    report = instance_report(args.n, args.snr_db, args.seed, certify=args.certify)
    if args.out is None:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
        return 0
    os.makedirs(args.out, exist_ok=True)
    _emit(json.dumps(report, indent=2), args.out, "report.json")
    _emit(_trace_csv_text(report["trace"]), args.out, "trace.csv")
    return 0


def _cmd_certify(args) -> int:
    sigma, snr_db, c0 = _resolve_sigma(args, args.n)
    record, artifacts = run_trial_detailed(
        args.n, sigma, args.seed, snr_db=snr_db, c0=c0, certify=False,
        max_iter=args.max_iter, step_tol=args.step_tol,
    )
    certificate = verify_certificate(artifacts.comparison, artifacts.xhat)
    payload = {
        "context": {"n": args.n, "sigma": sigma, "snr_db": snr_db, "c0": c0,
                    "seed": args.seed, "tau": record.tau,
                    "converged": record.converged},
        "certificate": certificate.as_dict(),
    }
    _emit(json.dumps(payload, indent=2), args.out, "certificate.json")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "heatmap":
            return _cmd_sweep(args, "snr_db_values")
        if args.command == "c0-sweep":
            return _cmd_sweep(args, "c0_values")
        if args.command == "rank":
            return _cmd_rank(args)
        if args.command == "instance":
            return _cmd_instance(args)
        if args.command == "certify":
            return _cmd_certify(args)
        raise ValueError(f"unknown command {args.command!r}")
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
