"""Rank extraction from phases and ranking-quality metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import align_phase
from .model import ComparisonMatrix, GroundTruth, RankingVector

__all__ = [
    "ExtractedRanking",
    "extract_ranking",
    "orientation_resolve",
    "kendall_tau_normalized",
    "max_displacement",
    "angle_error",
]


@dataclass(frozen=True)
class ExtractedRanking:
    """A recovered ranking: permutation, aligned angles, and the circular
    gap used to linearize.

    angles are rotated so the first item after the cut sits at 0; ranks
    increase with angle along the circle from there.
    """

    ranks: np.ndarray
    angles: np.ndarray
    cut_gap: float

    def __post_init__(self):
        object.__setattr__(self, "ranks", np.asarray(self.ranks, dtype=int))
        object.__setattr__(self, "angles", np.asarray(self.angles, dtype=float))


def extract_ranking(x: RankingVector) -> ExtractedRanking:
    """Ranking from entry phases, canonicalized by circular-gap cutting.

    A global rotation moves every phase uniformly, so a plain argsort of
    angles is ill-defined. Ground-truth angles occupy only a half
    circle, leaving an empty arc of about pi in the estimate; cutting
    the circle at the largest gap between consecutive sorted angles
    canonicalizes the rotation, and items are ranked in increasing
    angular order from the cut. A tie on the largest gap breaks toward
    the cut whose first item has the smallest index; exact angle ties
    rank by item index.
    """
    theta = np.mod(np.angle(x.entries), 2.0 * np.pi)
    n = x.n
    order = np.argsort(theta, kind="stable")
    sorted_theta = theta[order]
    gaps = np.empty(n)
    gaps[:-1] = sorted_theta[1:] - sorted_theta[:-1]
    gaps[-1] = sorted_theta[0] + 2.0 * np.pi - sorted_theta[-1]
    candidates = np.flatnonzero(gaps == gaps.max())
    starts = order[(candidates + 1) % n]
    cut = int(candidates[np.argmin(starts)])
    start = (cut + 1) % n

    ranks = np.empty(n, dtype=int)
    ranks[order[(start + np.arange(n)) % n]] = np.arange(n)
    aligned = np.mod(theta - sorted_theta[start], 2.0 * np.pi)
    aligned[order[start]] = 0.0
    return ExtractedRanking(ranks=ranks, angles=aligned, cut_gap=float(gaps[cut]))


def orientation_resolve(predicted: ExtractedRanking, c: ComparisonMatrix) -> ExtractedRanking:
    """Pick the ranking or its reverse by agreement with Im C.

    The model cannot distinguish a ranking from its reverse (conjugating
    every measurement flips both), but the data can: under the angular
    embedding Im C_ij = sin(theta_i - theta_j), so sign(Im C_ij) should
    match sign(rank_i - rank_j). The summed agreement over i < j is
    positive for the correct orientation and negates under reversal;
    ties keep the input. Ground truth is never consulted, so this works
    on real data too.
    """
    im_sign = np.sign(np.triu(c.entries.imag, k=1))
    rank_sign = np.sign(predicted.ranks[:, None] - predicted.ranks[None, :])
    score = float(np.sum(im_sign * np.triu(rank_sign, k=1)))
    if score >= 0.0:
        return predicted
    n = predicted.ranks.shape[0]
    top = float(np.max(predicted.angles))
    return ExtractedRanking(
        ranks=(n - 1) - predicted.ranks,
        angles=top - predicted.angles,
        cut_gap=predicted.cut_gap,
    )


def _check_permutation(p: np.ndarray) -> None:
    if not np.array_equal(np.sort(p), np.arange(p.shape[0])):
        raise ValueError("input is not a permutation of 0..n-1")


def _merge_count(seq: list) -> tuple[list, int]:
    """Merge sort that counts inversions along the way, O(n log n)."""
    n = len(seq)
    if n < 2:
        return seq, 0
    mid = n // 2
    left, inv_l = _merge_count(seq[:mid])
    right, inv_r = _merge_count(seq[mid:])
    merged = []
    inversions = inv_l + inv_r
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            # right[j] jumps ahead of every remaining left element
            merged.append(right[j])
            inversions += len(left) - i
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, inversions


def _count_inversions(seq: np.ndarray) -> int:
    return _merge_count(list(seq))[1]


def kendall_tau_normalized(predicted: np.ndarray, truth: np.ndarray) -> float:
    """Fraction of unordered pairs the two rankings order the same way.

    Range [0, 1]: 1 for identical rankings, 0 for exact reversal, 0.5
    at the random baseline. Computed as (C(n,2) - inversions) / C(n,2)
    with merge-sort inversion counting.
    """
    p = np.asarray(predicted, dtype=int)
    t = np.asarray(truth, dtype=int)
    if p.shape != t.shape or p.ndim != 1:
        raise ValueError(f"dimension mismatch: {p.shape} vs {t.shape}")
    _check_permutation(p)
    _check_permutation(t)
    n = p.shape[0]
    # predicted ranks read off in true-rank order; inversions of that
    # sequence are exactly the discordant pairs
    seq = np.empty(n, dtype=int)
    seq[t] = p
    total = n * (n - 1) // 2
    return float((total - _count_inversions(seq)) / total)


def max_displacement(predicted: np.ndarray, truth: np.ndarray) -> int:
    """Largest per-item rank displacement |rank_pred(k) - rank_true(k)|."""
    p = np.asarray(predicted, dtype=int)
    t = np.asarray(truth, dtype=int)
    if p.shape != t.shape or p.ndim != 1:
        raise ValueError(f"dimension mismatch: {p.shape} vs {t.shape}")
    _check_permutation(p)
    _check_permutation(t)
    return int(np.max(np.abs(p - t)))


def angle_error(xhat: RankingVector, truth: GroundTruth) -> float:
    """Largest entrywise angle error after optimal global rotation.

    Aligns xhat to the truth vector, then returns
    max_k |theta_k - theta_hat_k| with the difference wrapped to
    [0, pi].
    """
    aligned = align_phase(xhat.entries, truth.vector.entries)
    wrapped = np.angle(aligned * np.conj(truth.vector.entries))
    return float(np.max(np.abs(wrapped)))
