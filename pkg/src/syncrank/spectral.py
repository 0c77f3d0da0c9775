"""Iterative Hermitian eigensolvers.

Power iteration supplies the leading eigenpair (GPM initialization) and
the spectral norm (noise diagnostics); Lanczos with full
reorthogonalization supplies the few smallest eigenvalues needed by the
certificate checks. Dense decompositions stay on the test side as
oracles: the experiment harness runs n up to 500 across hundreds of
trials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EigenResult",
    "ConvergenceError",
    "leading_eigenpair",
    "spectral_norm",
    "smallest_eigenvalues",
]


class ConvergenceError(RuntimeError):
    """An eigensolver failed to meet its residual tolerance.

    Carries the best iterate so far. Callers that can tolerate an
    unconverged direction (the harness records such trials as data, not
    failures) pick it off the exception.
    """

    def __init__(self, message, *, value=None, vector=None, residual=None, iterations=0):
        super().__init__(message)
        self.value = value
        self.vector = vector
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class EigenResult:
    """One eigenpair with its exactly measured residual.

    vector has unit 2-norm; residual = ||A v - value * v||_2 as
    recomputed from the returned pair, not an internal estimate.
    """

    value: float
    vector: np.ndarray
    residual: float
    iterations: int


def _random_unit(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def leading_eigenpair(a: np.ndarray, tol: float | None = None, max_iter: int = 1000,
                      rng: np.random.Generator | None = None) -> EigenResult:
    """Largest-magnitude eigenpair of a Hermitian matrix by power iteration.

    Parameters
    ----------
    a : (n, n) Hermitian array.
    tol : residual tolerance on ||A v - lambda v||_2. Defaults to
        1e-10 * n, scaling with ||C||_2 ~ n for comparison matrices.
    max_iter : iteration cap.
    rng : generator for the random start. A fixed default generator
        keeps results reproducible when omitted; results are
        deterministic given (a, seed, tol).

    The eigenvalue estimate is the Rayleigh quotient of the current
    iterate. Raises ConvergenceError when the tolerance is not met
    within max_iter, e.g. when the two largest magnitudes (nearly) tie
    and no single dominant direction exists; the exception carries the
    last iterate.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix must be square")
    if tol is None:
        tol = 1e-10 * n
    if tol <= 0:
        raise ValueError("tol must be positive")
    if rng is None:
        rng = np.random.default_rng(0)

    v = _random_unit(n, rng)
    value = 0.0
    residual = np.inf
    for it in range(1, max_iter + 1):
        w = a @ v
        wnorm = np.linalg.norm(w)
        if wnorm == 0.0:
            # v is an exact null vector; 0 is the (only) eigenvalue seen
            return EigenResult(0.0, v, 0.0, it)
        value = float(np.vdot(v, w).real)
        residual = float(np.linalg.norm(w - value * v))
        if residual <= tol:
            return EigenResult(value, v, residual, it)
        v = w / wnorm
    raise ConvergenceError(
        f"power iteration stalled: residual {residual:.3e} > tol {tol:.3e} "
        f"after {max_iter} iterations",
        value=value, vector=v, residual=residual, iterations=max_iter,
    )


def spectral_norm(a: np.ndarray, tol: float = 1e-10, max_iter: int = 1000,
                  rng: np.random.Generator | None = None) -> float:
    """Largest singular value of a matrix by power iteration on A* A.

    Works for any matrix; for Hermitian A this equals max |lambda|.
    `tol` is relative: iteration stops once the Rayleigh residual of
    A* A drops below tol * lambda, giving ~tol relative accuracy in the
    squared singular value.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError("matrix must be 2-d")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if rng is None:
        rng = np.random.default_rng(0)

    ah = a.conj().T
    v = _random_unit(a.shape[1], rng)
    lam = 0.0
    residual = np.inf
    for _ in range(1, max_iter + 1):
        u = ah @ (a @ v)
        lam = float(np.vdot(v, u).real)  # = ||A v||^2 >= 0
        residual = float(np.linalg.norm(u - lam * v))
        if residual <= tol * max(lam, np.finfo(float).tiny):
            return float(np.sqrt(max(lam, 0.0)))
        v = u / np.linalg.norm(u)
    raise ConvergenceError(
        f"singular-value iteration stalled: residual {residual:.3e} after {max_iter} iterations",
        value=float(np.sqrt(max(lam, 0.0))), vector=v, residual=residual, iterations=max_iter,
    )


def smallest_eigenvalues(a: np.ndarray, k: int, tol: float | None = None,
                         max_iter: int | None = None,
                         rng: np.random.Generator | None = None) -> list[EigenResult]:
    """The k algebraically smallest eigenpairs of a Hermitian matrix.

    Lanczos with full reorthogonalization. Krylov spaces are shift
    invariant, so iterating on A directly yields the same Ritz
    information as the shifted PSD operator c I - A while keeping
    eigenvalues in place. On (near-)breakdown the captured invariant
    subspace is kept and the basis restarts in a fresh orthogonal
    direction, so matrices with few distinct eigenvalues resolve exactly.

    tol bounds the true residual ||A y - theta y||_2 of each returned
    Ritz pair (default 1e-8 * n); the basis grows to at most
    min(n, max(60, 10 k)) vectors unless max_iter overrides. Results are
    sorted ascending by eigenvalue. Raises ConvergenceError if the k
    smallest Ritz pairs still exceed tol at the basis cap.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix must be square")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if tol is None:
        tol = 1e-8 * n
    if rng is None:
        rng = np.random.default_rng(0)
    m_max = min(n, max(60, 10 * k)) if max_iter is None else min(n, max_iter)
    m_max = max(m_max, k)

    basis: list[np.ndarray] = []
    alphas: list[float] = []
    betas: list[float] = []  # betas[j] couples basis[j] and basis[j+1]
    scale = max(float(np.max(np.abs(a))), 1.0)
    breakdown = 1e-13 * scale * n

    def orthogonalized_random() -> np.ndarray | None:
        # fresh start direction for the next Lanczos block after breakdown
        for _ in range(5):
            v = _random_unit(n, rng)
            for q in basis:
                v = v - np.vdot(q, v) * q
            norm = np.linalg.norm(v)
            if norm > 1e-8:
                return v / norm
        return None

    q = _random_unit(n, rng)
    new_block = True  # no beta coupling into the first vector of a block
    while len(basis) < m_max:
        basis.append(q)
        w = a @ q
        alpha = float(np.vdot(q, w).real)
        alphas.append(alpha)
        w = w - alpha * q
        if not new_block:
            w = w - betas[-1] * basis[-2]
        # full reorthogonalization, two passes
        for _ in range(2):
            for qi in basis:
                w = w - np.vdot(qi, w) * qi
        beta = float(np.linalg.norm(w))
        if len(basis) == m_max:
            break
        if beta <= breakdown:
            # invariant subspace captured; restart orthogonally if room remains
            q = orthogonalized_random()
            if q is None:
                break
            betas.append(0.0)
            new_block = True
        else:
            betas.append(beta)
            q = w / beta
            new_block = False

    m = len(basis)
    t = np.zeros((m, m))
    t[np.arange(m), np.arange(m)] = alphas
    if m > 1:
        off = np.array(betas[: m - 1])
        t[np.arange(m - 1), np.arange(1, m)] = off
        t[np.arange(1, m), np.arange(m - 1)] = off
    # Ritz pairs of the projected operator; eigh on the small projection
    theta, s = np.linalg.eigh(t)
    q_mat = np.stack(basis, axis=1)

    results = []
    worst = None
    for idx in range(min(k, m)):
        y = q_mat @ s[:, idx]
        y = y / np.linalg.norm(y)
        value = float(theta[idx])
        residual = float(np.linalg.norm(a @ y - value * y))
        results.append(EigenResult(value, y, residual, m))
        if worst is None or residual > worst.residual:
            worst = results[-1]
    if len(results) < k or worst.residual > tol:
        raise ConvergenceError(
            f"Lanczos basis of {m} vectors left residual "
            f"{worst.residual if worst else np.inf:.3e} > tol {tol:.3e} for the "
            f"{k} smallest eigenvalues",
            value=worst.value if worst else None,
            vector=worst.vector if worst else None,
            residual=worst.residual if worst else None,
            iterations=m,
        )
    return results
