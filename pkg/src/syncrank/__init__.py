"""Ranking from noisy pairwise comparisons via phase synchronization.

Encodes ranks as phases on the unit circle, observes a Hermitian
rank-one signal plus Gaussian noise, recovers the phases with a
spectrally initialized generalized power method, reads the ranking
back off the circle, and (optionally) certifies that the recovered
point is the unique optimum of the semidefinite relaxation.
"""

from .certificate import (
    CertificateReport,
    CertificateTolerances,
    build_certificate,
    sdp_objective,
    verify_certificate,
)
from .geometry import align_phase, phase_project, quotient_distance
from .gpm import FixedPointReport, GpmConfig, GpmTrace, StepRecord, gpm_step, \
    initialize, run_gpm
from .harness import (
    ExperimentGrid,
    TrialArtifacts,
    TrialRecord,
    aggregate_cells,
    c0_sweep,
    default_c0_grid,
    default_heatmap_grid,
    derive_seed,
    heatmap_sweep,
    instance_report,
    load_raw_csv,
    rank_csv,
    run_trial,
    run_trial_detailed,
    write_cells_csv,
    write_trials_csv,
)
from .metrics import ExtractedRanking, angle_error, extract_ranking, \
    kendall_tau_normalized, max_displacement, orientation_resolve
from .model import (
    ComparisonMatrix,
    GroundTruth,
    RankingVector,
    RawComparisons,
    embed_raw,
    generate_ground_truth,
    generate_noise,
    sigma_from_c0,
    sigma_from_snr_db,
    synthesize,
)
from .spectral import ConvergenceError, EigenResult, leading_eigenpair, \
    smallest_eigenvalues, spectral_norm

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "RankingVector", "ComparisonMatrix", "GroundTruth", "RawComparisons",
    "generate_ground_truth", "generate_noise", "synthesize",
    "sigma_from_snr_db", "sigma_from_c0", "embed_raw",
    "quotient_distance", "phase_project", "align_phase",
    "ConvergenceError", "EigenResult", "leading_eigenpair", "spectral_norm",
    "smallest_eigenvalues",
    "GpmConfig", "GpmTrace", "StepRecord", "FixedPointReport", "gpm_step",
    "initialize", "run_gpm",
    "ExtractedRanking", "extract_ranking", "orientation_resolve",
    "kendall_tau_normalized", "max_displacement", "angle_error",
    "CertificateReport", "CertificateTolerances", "build_certificate",
    "verify_certificate", "sdp_objective",
    "ExperimentGrid", "TrialRecord", "TrialArtifacts", "derive_seed",
    "run_trial", "run_trial_detailed", "heatmap_sweep", "c0_sweep",
    "default_heatmap_grid", "default_c0_grid", "aggregate_cells",
    "write_trials_csv", "write_cells_csv", "load_raw_csv", "rank_csv",
    "instance_report",
]
