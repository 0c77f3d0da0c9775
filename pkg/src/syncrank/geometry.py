"""Quotient geometry of rankings modulo a global phase.

x and e^{i theta} x encode the same ranking, so distances are measured
on the quotient space: the Euclidean metric minimized over the unknown
rotation.
"""

from __future__ import annotations

import numpy as np

from .model import RankingVector

__all__ = ["quotient_distance", "phase_project", "align_phase"]


def quotient_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Euclidean distance between x and y minimized over a global phase.

    The minimizing rotation in min_theta ||x - e^{i theta} y||_2 aligns
    the phase of <x, y>; the norm is taken of the aligned difference
    directly rather than through the equivalent closed form
    sqrt(||x||^2 + ||y||^2 - 2 |<x, y>|), whose cancellation floors the
    result near sqrt(eps) for equivalent inputs.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    inner = np.vdot(x, y)
    magnitude = abs(inner)
    if magnitude == 0.0:
        # every rotation is equally bad
        return float(np.sqrt(np.vdot(x, x).real + np.vdot(y, y).real))
    return float(np.linalg.norm(x - (inner.conjugate() / magnitude) * y))


def phase_project(v: np.ndarray) -> RankingVector:
    """Entrywise projection onto unit modulus, v_k / |v_k|.

    Zero entries have no phase and map to 1 by convention, keeping the
    projection total; the (measure-zero) event stays observable through
    the pre-projection modulus recorded in iteration traces.
    """
    v = np.asarray(v, dtype=complex)
    modulus = np.abs(v)
    zero = modulus == 0.0
    projected = np.where(zero, 1.0 + 0.0j, v / np.where(zero, 1.0, modulus))
    return RankingVector(projected)


def align_phase(x: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Rotate x by the global phase that best matches `reference`.

    Returns e^{-i phi} x with phi = arg<reference, x>, so that
    ||aligned - reference||_2 = quotient_distance(x, reference).
    Undefined when the two vectors are (numerically) orthogonal.
    """
    x = np.asarray(x, dtype=complex)
    reference = np.asarray(reference, dtype=complex)
    if x.shape != reference.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {reference.shape}")
    inner = np.vdot(reference, x)
    if abs(inner) < 1e-14:
        raise ValueError("alignment undefined: <reference, x> is numerically zero")
    return x * np.exp(-1j * np.angle(inner))
