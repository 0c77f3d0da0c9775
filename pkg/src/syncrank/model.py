"""Data model for ranking by phase synchronization.

Items carry ranking angles theta_k = pi * r_k / (n - 1) on the half
circle, encoded as the unit-modulus vector z_k = e^{i theta_k}. Observed
data is the Hermitian matrix C = z z* + sigma W with complex Gaussian
noise W; sparse real-valued score offsets embed into the same form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RankingVector",
    "ComparisonMatrix",
    "GroundTruth",
    "RawComparisons",
    "generate_ground_truth",
    "generate_noise",
    "synthesize",
    "sigma_from_snr_db",
    "sigma_from_c0",
    "embed_raw",
]

UNIT_MODULUS_TOL = 1e-12
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class RankingVector:
    """Length-n complex vector with unit-modulus entries.

    Entry phases encode item ranks; the vector is only meaningful up to
    a global phase rotation.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 1 or entries.shape[0] < 2:
            raise ValueError("RankingVector needs a 1-d vector with n >= 2 entries")
        if np.max(np.abs(np.abs(entries) - 1.0)) > UNIT_MODULUS_TOL:
            raise ValueError("RankingVector entries must have unit modulus within 1e-12")

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class ComparisonMatrix:
    """n x n Hermitian matrix of pairwise phase measurements."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("ComparisonMatrix must be square")
        if entries.shape[0] < 2:
            raise ValueError("ComparisonMatrix needs n >= 2")
        if np.max(np.abs(entries - entries.conj().T)) > HERMITIAN_TOL:
            raise ValueError("ComparisonMatrix is not Hermitian within 1e-12")
        if np.max(np.abs(entries.diagonal().imag)) > HERMITIAN_TOL:
            raise ValueError("ComparisonMatrix diagonal must be real")

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class GroundTruth:
    """A known ranking: the permutation, its angles, and its phase vector.

    angles[k] = pi * ranks[k] / (n - 1) exactly, vector[k] = e^{i angles[k]}.
    """

    ranks: np.ndarray
    angles: np.ndarray
    vector: RankingVector

    def __post_init__(self):
        ranks = np.asarray(self.ranks, dtype=int)
        angles = np.asarray(self.angles, dtype=float)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "angles", angles)
        n = ranks.shape[0]
        if n < 2:
            raise ValueError("GroundTruth needs n >= 2")
        if not np.array_equal(np.sort(ranks), np.arange(n)):
            raise ValueError("ranks must be a permutation of 0..n-1")
        if not np.array_equal(angles, np.pi * ranks / (n - 1)):
            raise ValueError("angles must equal pi * ranks / (n - 1) exactly")
        if self.vector.n != n:
            raise ValueError("vector length does not match ranks")
        if np.max(np.abs(self.vector.entries - np.exp(1j * angles))) > UNIT_MODULUS_TOL:
            raise ValueError("vector entries must equal e^{i angles}")

    @property
    def n(self) -> int:
        return self.ranks.shape[0]


@dataclass(frozen=True)
class RawComparisons:
    """Sparse pairwise score offsets, at most one per unordered pair.

    Each observation (i, j, value) says item i leads item j by `value`
    rank units; the reverse direction is implied by symmetrization.
    """

    observations: tuple
    n: int

    def __post_init__(self):
        obs = tuple((int(i), int(j), float(v)) for i, j, v in self.observations)
        object.__setattr__(self, "observations", obs)
        if self.n < 2:
            raise ValueError("RawComparisons needs n >= 2")
        seen = set()
        for i, j, _ in obs:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"item index out of range at pair ({i}, {j})")
            if i == j:
                raise ValueError(f"self-comparison at pair ({i}, {j})")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate comparison for pair ({key[0]}, {key[1]})")
            seen.add(key)


def generate_ground_truth(n: int, rng: np.random.Generator, shuffle: bool = False) -> GroundTruth:
    """Ground-truth ranking of n items.

    Ranks are the identity permutation unless `shuffle` is set, in which
    case a uniform random permutation is drawn from `rng`. Angles follow
    theta_k = pi * r_k / (n - 1), so adjacent ranks sit pi/(n-1) apart
    and the whole ranking spans the half circle [0, pi].
    """
    if n < 2:
        raise ValueError("need at least 2 items")
    ranks = rng.permutation(n) if shuffle else np.arange(n)
    angles = np.pi * ranks / (n - 1)
    vector = RankingVector(np.exp(1j * angles))
    return GroundTruth(ranks=ranks, angles=angles, vector=vector)


def generate_noise(n: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian complex Gaussian noise with CN(0, 1) off-diagonals.

    Upper-triangle entries have independent real and imaginary parts
    ~ N(0, 1/2) (per-entry variance 1) and are mirrored by conjugation;
    diagonal entries are real N(0, 1). Spectral norm concentrates near
    2 sqrt(n).
    """
    if n < 2:
        raise ValueError("need at least 2 items")
    re = rng.normal(0.0, math.sqrt(0.5), size=(n, n))
    im = rng.normal(0.0, math.sqrt(0.5), size=(n, n))
    upper = np.triu(re + 1j * im, k=1)
    w = upper + upper.conj().T
    w[np.diag_indices(n)] = rng.normal(0.0, 1.0, size=n)
    return w


def synthesize(truth: GroundTruth, sigma: float, rng: np.random.Generator) -> ComparisonMatrix:
    """Observed comparison matrix C = z z* + sigma W."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    z = truth.vector.entries
    c = np.outer(z, z.conj())
    if sigma > 0:
        c = c + sigma * generate_noise(truth.n, rng)
    return ComparisonMatrix(c)


def sigma_from_snr_db(snr_db: float) -> float:
    """Noise level for a given SNR in decibels.

    The axis convention is SNR_dB = -10 log10(sigma): 0 dB means unit
    noise and every +10 dB divides sigma by ten. Signal entries have
    unit modulus, so sigma alone sets the per-entry noise-to-signal
    ratio.
    """
    return float(10.0 ** (-snr_db / 10.0))


def sigma_from_c0(c0: float, n: int) -> float:
    """Noise level on the threshold scaling sigma = c0 * sqrt(n / ln n)."""
    if c0 <= 0:
        raise ValueError("c0 must be positive")
    if n < 3:
        raise ValueError("need n >= 3 so that ln n > 1")
    return float(c0 * math.sqrt(n / math.log(n)))


def embed_raw(raw: RawComparisons) -> ComparisonMatrix:
    """Angular embedding of raw score offsets.

    Each observed offset v maps to the phase Theta = pi * v / (n - 1),
    giving C_ij = e^{i Theta} and C_ji its conjugate. Unobserved
    off-diagonal entries stay 0 (GPM then weighs only observed pairs);
    diagonal entries are 1. Offsets must satisfy |v| <= n - 1 so that
    Theta stays in [-pi, pi].
    """
    n = raw.n
    c = np.eye(n, dtype=complex)
    for i, j, value in raw.observations:
        if abs(value) > n - 1:
            raise ValueError(
                f"offset out of range at pair ({i}, {j}): |{value}| > {n - 1}"
            )
        entry = np.exp(1j * np.pi * value / (n - 1))
        c[i, j] = entry
        c[j, i] = np.conj(entry)
    return ComparisonMatrix(c)
