"""Seeded random matrices.

Every generator takes an explicit ``numpy.random.Generator``. Trial ``i``
of a search seeded with ``seed`` uses ``trial_rng(seed, i)``, so results do
not depend on the order in which trials run.
"""

import numpy as np


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_psd(rng, n, mu=0.0, rank=None):
    """``G G^* + mu I`` with ``G`` a complex Gaussian ``n x rank`` block."""
    rank = n if rank is None else rank
    G = complex_gaussian(rng, (n, rank))
    M = G @ G.conj().T + mu * np.eye(n)
    return (M + M.conj().T) / 2


def random_unitary(rng, n):
    Q, R = np.linalg.qr(complex_gaussian(rng, (n, n)))
    # Fix column phases so the distribution is Haar.
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_isometry(rng, n, k):
    """An ``n x k`` matrix with orthonormal columns."""
    return random_unitary(rng, n)[:, :k]


def random_contraction(rng, n, k):
    """An ``n x k`` matrix with operator norm at most one."""
    G = complex_gaussian(rng, (n, k))
    return G / max(1.0, np.linalg.norm(G, 2))


def random_hermitian_with_spectrum(rng, spectrum):
    U = random_unitary(rng, len(spectrum))
    M = (U * np.asarray(spectrum, dtype=float)) @ U.conj().T
    return (M + M.conj().T) / 2


def random_density(rng, n, rank=None):
    M = random_psd(rng, n, rank=rank)
    return M / np.trace(M).real
