"""Dual certificate for the ranking SDP.

The synchronization problem relaxes to
max Trace(C X) s.t. diag(X) = 1, X PSD. For a unit-modulus candidate x,
the dual matrix S = diag(mu) - C with mu_k = Re((C x)_k conj(x_k))
certifies X = x x* as the unique optimum when S is PSD with rank n - 1
and S x = 0. Certification is reported, never assumed: at high noise
certified=False is an expected outcome, not a failure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .model import ComparisonMatrix, RankingVector
from .spectral import ConvergenceError, smallest_eigenvalues

__all__ = [
    "CertificateTolerances",
    "CertificateReport",
    "build_certificate",
    "verify_certificate",
    "sdp_objective",
]


@dataclass(frozen=True)
class CertificateTolerances:
    """Decision thresholds for the three dual conditions.

    S has entries of order 1 and eigenvalues of order n, so the
    eigenvalue thresholds scale with n and the null residual with
    sqrt(n); rank_tol sits well above psd_tol to separate "rank n-1"
    from "PSD up to round-off".
    """

    psd_tol: float
    rank_tol: float
    null_tol: float

    @classmethod
    def for_size(cls, n: int) -> "CertificateTolerances":
        return cls(psd_tol=1e-8 * n, rank_tol=1e-6 * n, null_tol=1e-6 * math.sqrt(n))


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of the dual-certificate check.

    certified = psd_ok and rank_ok and null_ok, i.e.
    lambda_min >= -psd_tol, lambda_2 >= rank_tol,
    ||S x||_2 <= null_tol. lambda fields are NaN when the eigensolver
    failed (the report is then incomplete and certified is False).
    """

    mu: np.ndarray
    lambda_min: float
    lambda_2: float
    null_residual: float
    psd_ok: bool
    rank_ok: bool
    null_ok: bool
    certified: bool
    tolerances: CertificateTolerances

    def as_dict(self) -> dict:
        return {
            "mu": [float(m) for m in self.mu],
            "lambda_min": float(self.lambda_min),
            "lambda_2": float(self.lambda_2),
            "null_residual": float(self.null_residual),
            "psd_ok": self.psd_ok,
            "rank_ok": self.rank_ok,
            "null_ok": self.null_ok,
            "certified": self.certified,
            "tolerances": {
                "psd_tol": self.tolerances.psd_tol,
                "rank_tol": self.tolerances.rank_tol,
                "null_tol": self.tolerances.null_tol,
            },
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)


def build_certificate(c: ComparisonMatrix, xhat: RankingVector) -> tuple[np.ndarray, np.ndarray]:
    """Dual matrix S = diag(mu) - C and its diagonal mu at the candidate.

    mu_k = Re((C x)_k conj(x_k)). The Re form (rather than the modulus
    |(C x)_k|) keeps the complementary slackness identity
    sum(mu) - Re(x* C x) = 0 exact for every unit-modulus x; at true
    fixed points the two coincide because phases align.
    """
    x = xhat.entries
    w = c.entries @ x
    mu = (w * np.conj(x)).real
    s = np.diag(mu.astype(complex)) - c.entries
    return s, mu


def verify_certificate(c: ComparisonMatrix, xhat: RankingVector,
                       tolerances: CertificateTolerances | None = None) -> CertificateReport:
    """Check the three dual conditions for the candidate xhat.

    PSD-ness and the rank margin come from the two smallest eigenvalues
    of S, the null condition from ||S x||_2. An eigensolver convergence
    failure produces an incomplete report (NaN eigenvalues,
    certified=False) rather than an exception: losing the spectral gap
    at high noise is the expected failure signal.
    """
    tol = tolerances if tolerances is not None else CertificateTolerances.for_size(c.n)
    s, mu = build_certificate(c, xhat)
    null_residual = float(np.linalg.norm(s @ xhat.entries))
    null_ok = null_residual <= tol.null_tol
    try:
        pairs = smallest_eigenvalues(s, 2)
    except ConvergenceError:
        return CertificateReport(
            mu=mu, lambda_min=math.nan, lambda_2=math.nan,
            null_residual=null_residual, psd_ok=False, rank_ok=False,
            null_ok=null_ok, certified=False, tolerances=tol,
        )
    lambda_min = pairs[0].value
    lambda_2 = pairs[1].value
    psd_ok = lambda_min >= -tol.psd_tol
    rank_ok = lambda_2 >= tol.rank_tol
    return CertificateReport(
        mu=mu, lambda_min=lambda_min, lambda_2=lambda_2,
        null_residual=null_residual, psd_ok=psd_ok, rank_ok=rank_ok,
        null_ok=null_ok, certified=psd_ok and rank_ok and null_ok,
        tolerances=tol,
    )


def sdp_objective(c: ComparisonMatrix, x: RankingVector) -> float:
    """Re(x* C x), the SDP objective at the rank-1 point X = x x*."""
    v = x.entries
    return float(np.vdot(v, c.entries @ v).real)
