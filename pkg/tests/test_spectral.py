import numpy as np
import pytest

from syncrank import (
    ConvergenceError,
    build_certificate,
    generate_ground_truth,
    leading_eigenpair,
    quotient_distance,
    smallest_eigenvalues,
    spectral_norm,
    synthesize,
)
from syncrank.model import generate_noise

from .oracles import eigh_oracle


def _random_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def test_leading_rank_one():
    truth = generate_ground_truth(10, np.random.default_rng(0), shuffle=False)
    z = truth.vector.entries
    result = leading_eigenpair(np.outer(z, z.conj()))
    assert result.value == pytest.approx(10.0, abs=1e-8)
    scaled = np.sqrt(10.0) * result.vector
    assert quotient_distance(scaled, z) <= 1e-6


def test_leading_diagonal():
    result = leading_eigenpair(np.diag([3.0, 1.0]).astype(complex))
    assert result.value == pytest.approx(3.0, abs=1e-10)
    assert result.residual <= 1e-10 * 2


def test_leading_noisy_spiked_matrix():
    rng = np.random.default_rng(17)
    truth = generate_ground_truth(100, rng, shuffle=True)
    c = synthesize(truth, 1.0, rng)
    result = leading_eigenpair(c.entries, rng=np.random.default_rng(1))
    assert 80.0 <= result.value <= 120.0


def test_leading_fails_on_symmetric_spectrum():
    # |+1| = |-1|: power iteration cannot separate them
    with pytest.raises(ConvergenceError) as exc_info:
        leading_eigenpair(np.diag([1.0, -1.0]).astype(complex), max_iter=50)
    err = exc_info.value
    assert err.iterations == 50
    assert err.vector.shape == (2,)
    assert np.isfinite(err.residual)


def _spiked_hermitian(n, rng):
    """Random Hermitian matrix with a planted dominant eigenvalue.

    Power iteration requires a modulus gap; plain random matrices have
    near-degenerate edges, which the solver correctly refuses.
    """
    g = _random_hermitian(n, rng)
    u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    u /= np.linalg.norm(u)
    spike = 3.0 * np.linalg.norm(g, 2) + 1.0
    return g + spike * np.outer(u, u.conj())


def test_leading_matches_dense_oracle():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(2, 30))
        a = _spiked_hermitian(n, rng)
        result = leading_eigenpair(a, rng=np.random.default_rng(0))
        values, vectors = eigh_oracle(a)
        assert result.value == pytest.approx(values[-1], abs=1e-8 * n)
        assert quotient_distance(result.vector, vectors[:, -1]) <= 1e-6


def test_spectral_norm_zero_matrix():
    assert spectral_norm(np.zeros((4, 4), dtype=complex)) == 0.0


def test_spectral_norm_rank_one():
    truth = generate_ground_truth(12, np.random.default_rng(0), shuffle=False)
    z = truth.vector.entries
    assert spectral_norm(np.outer(z, z.conj())) == pytest.approx(12.0, abs=1e-6)


def test_spectral_norm_wigner_scaling():
    w = generate_noise(400, np.random.default_rng(2))
    assert 1.7 <= spectral_norm(w) / np.sqrt(400) <= 2.3


def test_spectral_norm_matches_dense_oracle():
    rng = np.random.default_rng(9)
    for _ in range(20):
        n = int(rng.integers(2, 30))
        a = _random_hermitian(n, rng)
        expected = np.abs(eigh_oracle(a)[0]).max()
        assert spectral_norm(a, rng=np.random.default_rng(0)) == pytest.approx(
            expected, rel=1e-7, abs=1e-9
        )


def test_smallest_diagonal():
    result = smallest_eigenvalues(np.diag([0.0, 1.0, 2.0]).astype(complex), 2)
    assert [r.value for r in result] == pytest.approx([0.0, 1.0], abs=1e-9)


def test_smallest_on_noiseless_certificate():
    # S = n I - zz*: eigenvalues {0, n, ..., n}
    truth = generate_ground_truth(20, np.random.default_rng(0), shuffle=True)
    c = synthesize(truth, 0.0, np.random.default_rng(0))
    s, _ = build_certificate(c, truth.vector)
    result = smallest_eigenvalues(s, 2)
    assert result[0].value == pytest.approx(0.0, abs=1e-8)
    assert result[1].value == pytest.approx(20.0, abs=1e-6)


def test_smallest_matches_dense_oracle():
    rng = np.random.default_rng(31)
    for _ in range(15):
        n = int(rng.integers(4, 51))
        a = _random_hermitian(n, rng)
        result = smallest_eigenvalues(a, 2, rng=np.random.default_rng(0))
        values, _ = eigh_oracle(a)
        got = [r.value for r in result]
        assert got == pytest.approx(values[:2].tolist(), abs=1e-8 * n)


def test_smallest_residuals_within_tolerance():
    rng = np.random.default_rng(6)
    a = _random_hermitian(35, rng)
    for r in smallest_eigenvalues(a, 2, rng=np.random.default_rng(0)):
        assert r.residual <= 1e-8 * 35


def test_leading_bitwise_determinism():
    a = _spiked_hermitian(30, np.random.default_rng(4))
    first = leading_eigenpair(a, rng=np.random.default_rng(5))
    second = leading_eigenpair(a, rng=np.random.default_rng(5))
    assert first.value == second.value
    assert np.array_equal(first.vector, second.vector)
    assert first.iterations == second.iterations


def test_smallest_bitwise_determinism():
    a = _random_hermitian(25, np.random.default_rng(12))
    first = smallest_eigenvalues(a, 2, rng=np.random.default_rng(7))
    second = smallest_eigenvalues(a, 2, rng=np.random.default_rng(7))
    for x, y in zip(first, second):
        assert x.value == y.value
        assert np.array_equal(x.vector, y.vector)
