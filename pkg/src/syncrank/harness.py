"""Seeded Monte Carlo experiment harness.

Runs the full pipeline (truth -> synthesize -> spectral init -> GPM ->
extraction -> orientation -> metrics, optional certificate) over noise
sweeps, single instances, and user-supplied comparison CSVs. Every
trial is fully determined by its derived 64-bit seed; sweep outputs are
byte-reproducible.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .certificate import CertificateReport, verify_certificate
from .gpm import FixedPointReport, GpmConfig, GpmTrace, initialize, run_gpm
from .metrics import ExtractedRanking, extract_ranking, kendall_tau_normalized, \
    max_displacement, orientation_resolve
from .model import ComparisonMatrix, GroundTruth, RankingVector, RawComparisons, \
    embed_raw, generate_ground_truth, sigma_from_c0, sigma_from_snr_db, synthesize
from .geometry import phase_project
from .spectral import ConvergenceError

__all__ = [
    "ExperimentGrid",
    "TrialRecord",
    "TrialArtifacts",
    "derive_seed",
    "run_trial",
    "run_trial_detailed",
    "heatmap_sweep",
    "c0_sweep",
    "default_heatmap_grid",
    "default_c0_grid",
    "aggregate_cells",
    "write_trials_csv",
    "write_cells_csv",
    "load_raw_csv",
    "rank_csv",
    "instance_report",
]

TRIALS_CSV_COLUMNS = [
    "n", "sigma", "snr_db", "c0", "trial", "seed", "tau", "max_disp",
    "converged", "iterations", "certified", "wall_time_ms",
]

CELLS_CSV_COLUMNS = ["n", "sigma", "snr_db", "c0", "trials", "mean_tau", "std_tau"]


@dataclass(frozen=True)
class ExperimentGrid:
    """A Monte Carlo sweep: sizes x one noise axis x trials per cell.

    Exactly one of snr_db_values / c0_values must be set. base_seed
    roots the documented seed-splitting rule; max_iter / step_tol /
    certify pass through to every trial.
    """

    n_values: tuple
    snr_db_values: tuple | None = None
    c0_values: tuple | None = None
    trials_per_cell: int = 5
    base_seed: int = 0
    max_iter: int | None = None
    step_tol: float | None = None
    certify: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if self.snr_db_values is not None:
            object.__setattr__(self, "snr_db_values",
                               tuple(float(s) for s in self.snr_db_values))
        if self.c0_values is not None:
            object.__setattr__(self, "c0_values",
                               tuple(float(c) for c in self.c0_values))
        if (self.snr_db_values is None) == (self.c0_values is None):
            raise ValueError("exactly one of snr_db_values / c0_values must be set")
        axis = self.snr_db_values if self.snr_db_values is not None else self.c0_values
        if not self.n_values or not axis:
            raise ValueError("grid axes must be nonempty")
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be at least 1")


@dataclass(frozen=True)
class TrialRecord:
    """One pipeline run. tau is None only when no iterate was available."""

    n: int
    sigma: float
    snr_db: float | None
    c0: float | None
    trial: int
    seed: int
    tau: float | None
    max_disp: int | None
    converged: bool
    iterations: int
    certified: bool | None
    wall_time_ms: float | None


@dataclass(frozen=True)
class TrialArtifacts:
    """Everything a single run produced, for instance-level reporting."""

    truth: GroundTruth
    comparison: ComparisonMatrix
    x0: RankingVector
    xhat: RankingVector
    trace: GpmTrace
    fixed_point: FixedPointReport
    extraction: ExtractedRanking
    certificate: CertificateReport | None


def derive_seed(base_seed: int, cell_index: int, trial_index: int) -> int:
    """Documented seed-splitting rule: one 64-bit stream per (cell, trial)."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(cell_index, trial_index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_trial_detailed(n: int, sigma: float, seed: int, *, snr_db: float | None = None,
                       c0: float | None = None, trial: int = 0, certify: bool = False,
                       max_iter: int | None = None, step_tol: float | None = None,
                       record_trace: bool = False, shuffle: bool = True,
                       ) -> tuple[TrialRecord, TrialArtifacts]:
    """One full pipeline run, returning the record and all artifacts.

    An initialization convergence failure is data, not an error: GPM
    continues from the eigensolver's best-effort iterate and the trial
    is recorded with converged=False whatever GPM then does.
    """
    rng = np.random.default_rng(seed)
    truth = generate_ground_truth(n, rng, shuffle=shuffle)
    comparison = synthesize(truth, sigma, rng)
    start = time.perf_counter()
    init_converged = True
    try:
        x0 = initialize(comparison, rng)
    except ConvergenceError as err:
        init_converged = False
        x0 = phase_project(err.vector)
    config = GpmConfig(max_iter=max_iter, step_tol=step_tol, record_trace=record_trace)
    xhat, trace, fixed_point = run_gpm(comparison, x0, config, truth)
    extraction = orientation_resolve(extract_ranking(xhat), comparison)
    tau = kendall_tau_normalized(extraction.ranks, truth.ranks)
    disp = max_displacement(extraction.ranks, truth.ranks)
    certificate = verify_certificate(comparison, xhat) if certify else None
    wall_time_ms = (time.perf_counter() - start) * 1000.0
    record = TrialRecord(
        n=n, sigma=float(sigma), snr_db=snr_db, c0=c0, trial=trial, seed=int(seed),
        tau=tau, max_disp=disp, converged=bool(trace.converged and init_converged),
        iterations=trace.iterations_used,
        certified=None if certificate is None else certificate.certified,
        wall_time_ms=wall_time_ms,
    )
    artifacts = TrialArtifacts(truth, comparison, x0, xhat, trace, fixed_point,
                               extraction, certificate)
    return record, artifacts


def run_trial(n: int, sigma: float, seed: int, **options) -> TrialRecord:
    """One full pipeline run; see run_trial_detailed for the artifacts."""
    record, _ = run_trial_detailed(n, sigma, seed, **options)
    return record


def _sweep_job(args: tuple) -> TrialRecord:
    n, sigma, seed, snr_db, c0, trial, certify, max_iter, step_tol = args
    return run_trial(n, sigma, seed, snr_db=snr_db, c0=c0, trial=trial,
                     certify=certify, max_iter=max_iter, step_tol=step_tol)


def _run_jobs(jobs: list, workers: int) -> list:
    if workers <= 1:
        return [_sweep_job(job) for job in jobs]
    # trials are independent; map preserves submission order, so output
    # ordering stays (cell, trial) regardless of completion order
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def _sweep(grid: ExperimentGrid, kind: str, workers: int, out_dir) -> list:
    jobs = []
    cell = 0
    for n in grid.n_values:
        axis = grid.snr_db_values if kind == "snr" else grid.c0_values
        for value in axis:
            if kind == "snr":
                sigma, snr_db, c0 = sigma_from_snr_db(value), value, None
            else:
                sigma, snr_db, c0 = sigma_from_c0(value, n), None, value
            for trial in range(grid.trials_per_cell):
                seed = derive_seed(grid.base_seed, cell, trial)
                jobs.append((n, sigma, seed, snr_db, c0, trial, grid.certify,
                             grid.max_iter, grid.step_tol))
            cell += 1
    records = _run_jobs(jobs, workers)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_trials_csv(records, os.path.join(out_dir, "trials.csv"))
        write_cells_csv(aggregate_cells(records), os.path.join(out_dir, "cells.csv"))
    return records


def heatmap_sweep(grid: ExperimentGrid, *, workers: int = 1, out_dir=None) -> list:
    """All (n, SNR) cells x trials, in deterministic (cell, trial) order."""
    if grid.snr_db_values is None:
        raise ValueError("heatmap sweep needs an snr_db axis")
    return _sweep(grid, "snr", workers, out_dir)


def c0_sweep(grid: ExperimentGrid, *, workers: int = 1, out_dir=None) -> list:
    """All (n, c0) cells x trials with sigma = c0 sqrt(n / ln n) per cell."""
    if grid.c0_values is None:
        raise ValueError("c0 sweep needs a c0 axis")
    return _sweep(grid, "c0", workers, out_dir)


def default_heatmap_grid() -> ExperimentGrid:
    """9 sizes x 50 SNR points = 450 cells, 5 trials each."""
    return ExperimentGrid(
        n_values=tuple(range(100, 501, 50)),
        snr_db_values=tuple(float(s) for s in np.linspace(-35.0, 5.0, 50)),
        trials_per_cell=5,
        base_seed=0,
    )


def default_c0_grid() -> ExperimentGrid:
    """Five threshold constants spanning two orders of magnitude."""
    return ExperimentGrid(
        n_values=(50, 100, 200, 300, 400),
        c0_values=(0.1, 0.3, 0.9, 2.7, 8.1),
        trials_per_cell=5,
        base_seed=0,
    )


def aggregate_cells(records: list) -> list:
    """Per-cell mean/std of tau (population std), in first-seen cell order."""
    cells: dict = {}
    order = []
    for rec in records:
        key = (rec.n, rec.sigma, rec.snr_db, rec.c0)
        if key not in cells:
            cells[key] = []
            order.append(key)
        if rec.tau is not None:
            cells[key].append(rec.tau)
    out = []
    for key in order:
        taus = np.array(cells[key], dtype=float)
        out.append({
            "n": key[0], "sigma": key[1], "snr_db": key[2], "c0": key[3],
            "trials": len(taus),
            "mean_tau": float(taus.mean()) if taus.size else None,
            "std_tau": float(taus.std()) if taus.size else None,
        })
    return out


def _format_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def record_row(record: TrialRecord) -> list:
    """trials.csv row. wall_time_ms stays empty: it is the one
    nondeterministic field and sweep outputs are byte-reproducible."""
    return [
        _format_field(record.n), _format_field(record.sigma),
        _format_field(record.snr_db), _format_field(record.c0),
        _format_field(record.trial), _format_field(record.seed),
        _format_field(record.tau), _format_field(record.max_disp),
        _format_field(record.converged), _format_field(record.iterations),
        _format_field(record.certified), "",
    ]


def write_trials_csv(records: list, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRIALS_CSV_COLUMNS)
        for rec in records:
            writer.writerow(record_row(rec))


def write_cells_csv(cells: list, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CELLS_CSV_COLUMNS)
        for cell in cells:
            writer.writerow([_format_field(cell[col]) for col in CELLS_CSV_COLUMNS])


def load_raw_csv(path, n: int) -> RawComparisons:
    """Parse a `i,j,value` comparison CSV into RawComparisons.

    Parse failures name the 1-based line; index/duplicate/range
    validation happens in RawComparisons and embed_raw.
    """
    observations = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: line 1: empty file, expected header 'i,j,value'")
        if [h.strip() for h in header] != ["i", "j", "value"]:
            raise ValueError(f"{path}: line 1: expected header 'i,j,value'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 fields, got {len(row)}")
            try:
                observations.append((int(row[0]), int(row[1]), float(row[2])))
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: could not parse '{','.join(row)}'")
    return RawComparisons(observations=tuple(observations), n=n)


def _check_connected(raw: RawComparisons) -> None:
    # ranks are only relative; disconnected components cannot be placed
    # against each other, so refuse rather than guess
    adjacency: list = [[] for _ in range(raw.n)]
    for i, j, _ in raw.observations:
        adjacency[i].append(j)
        adjacency[j].append(i)
    seen = {0}
    frontier = [0]
    while frontier:
        node = frontier.pop()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    if len(seen) != raw.n:
        raise ValueError(
            f"comparison graph is disconnected: reached {len(seen)} of {raw.n} items"
        )


def rank_csv(path, n: int, *, seed: int = 0, certify: bool = False,
             max_iter: int | None = None, step_tol: float | None = None) -> dict:
    """Rank items from a comparison CSV; returns a JSON-ready report.

    No tau: there is no ground truth for supplied data.
    """
    raw = load_raw_csv(path, n)
    _check_connected(raw)
    comparison = embed_raw(raw)
    rng = np.random.default_rng(seed)
    init_converged = True
    try:
        x0 = initialize(comparison, rng)
    except ConvergenceError as err:
        init_converged = False
        x0 = phase_project(err.vector)
    config = GpmConfig(max_iter=max_iter, step_tol=step_tol)
    xhat, trace, _ = run_gpm(comparison, x0, config)
    extraction = orientation_resolve(extract_ranking(xhat), comparison)
    report = {
        "n": n,
        "observations": len(raw.observations),
        "ranks": [int(r) for r in extraction.ranks],
        "angles": [float(a) for a in extraction.angles],
        "converged": bool(trace.converged and init_converged),
        "iterations": trace.iterations_used,
    }
    if certify:
        report["certificate"] = verify_certificate(comparison, xhat).as_dict()
    return report


def instance_report(n: int, snr_db: float, seed: int, *, certify: bool = True,
                    shuffle: bool = True) -> dict:
    """Single-instance deep dive with full trace.

    Carries everything needed to redraw the instance panels: predicted
    vs true ranks per item and the aligned estimated angles next to the
    true ones.
    """
    sigma = sigma_from_snr_db(snr_db)
    record, artifacts = run_trial_detailed(
        n, sigma, seed, snr_db=snr_db, certify=certify, record_trace=True,
        shuffle=shuffle,
    )
    report = {
        "params": {"n": n, "snr_db": snr_db, "sigma": sigma, "seed": int(seed)},
        "true_ranks": [int(r) for r in artifacts.truth.ranks],
        "predicted_ranks": [int(r) for r in artifacts.extraction.ranks],
        "true_angles": [float(a) for a in artifacts.truth.angles],
        "estimated_angles": [float(a) for a in artifacts.extraction.angles],
        "cut_gap": float(artifacts.extraction.cut_gap),
        "tau": record.tau,
        "max_disp": record.max_disp,
        "converged": record.converged,
        "iterations": record.iterations,
        "fixed_point_residual": float(artifacts.fixed_point.residual),
        "wall_time_ms": record.wall_time_ms,
        "trace": [
            {"t": s.t, "step": s.step, "dist_to_truth": s.dist_to_truth,
             "min_modulus": s.min_modulus}
            for s in artifacts.trace.steps
        ],
    }
    if artifacts.certificate is not None:
        report["certificate"] = artifacts.certificate.as_dict()
    return report
