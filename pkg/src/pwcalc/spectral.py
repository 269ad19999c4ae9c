"""Hermitian eigendecomposition with eigenvalue clustering, and the one- and
two-variable functional calculi built on it.

Matrices are plain complex ``ndarray``s; :func:`as_hermitian` is the gate
that validates and symmetrizes every input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    InfiniteValue,
    NonHermitianInput,
    NotCommuting,
    NotPSD,
    NotSelfAdjointConjugate,
)
from .extended import ExtendedOperator, is_inf

HERM_TOL = 1e-8
CLUSTER_TOL = 1e-10
RANK_TOL = 1e-10
COMMUTE_TOL = 1e-9


def opnorm(M) -> float:
    """Spectral norm; 0 for empty input."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def hermitize(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    return (M + M.conj().T) / 2


def as_hermitian(M, herm_tol: float = HERM_TOL) -> np.ndarray:
    """Validate ``M`` as a square Hermitian matrix and return ``(M + M*)/2``.

    Raises
    ------
    DimensionMismatch
        If ``M`` is not a non-empty square 2-d array.
    NonHermitianInput
        If ``||M - M*||_2 > herm_tol * max(1, ||M||_2)``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonHermitianInput("matrix has non-finite entries")
    defect = opnorm(M - M.conj().T)
    if defect > herm_tol * max(1.0, opnorm(M)):
        raise NonHermitianInput(f"Hermiticity defect {defect:.3e} exceeds tolerance")
    return hermitize(M)


def check_psd(M, rank_tol: float = RANK_TOL, herm_tol: float = HERM_TOL, what: str = "matrix"):
    """Symmetrize ``M`` and require ``lambda_min >= -rank_tol * ||M||_2``."""
    M = as_hermitian(M, herm_tol)
    w = np.linalg.eigvalsh(M)
    scale = max(abs(w[0]), abs(w[-1]))
    if w[0] < -rank_tol * scale:
        raise NotPSD(f"{what} has eigenvalue {w[0]:.3e} below -rank_tol*||M||")
    return M


def same_shape(*mats):
    n = mats[0].shape
    for M in mats[1:]:
        if M.shape != n:
            raise DimensionMismatch(f"shapes {n} and {M.shape} differ")


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Clustered spectrum ``M = sum_i eigenvalues[i] * projectors[i]``.

    ``bases[i]`` holds an orthonormal basis (as columns) of the range of
    ``projectors[i]``.
    """

    eigenvalues: np.ndarray
    projectors: tuple
    bases: tuple
    cluster_tol: float

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self) -> Iterator[tuple[float, np.ndarray]]:
        return iter(zip(self.eigenvalues.tolist(), self.projectors))

    def reconstruct(self, values=None) -> np.ndarray:
        vals = self.eigenvalues if values is None else values
        n = self.projectors[0].shape[0]
        out = np.zeros((n, n), dtype=complex)
        for v, P in zip(vals, self.projectors):
            out += v * P
        return out


def _cluster(w: np.ndarray, tol: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def decompose_eigh(w: np.ndarray, U: np.ndarray, cluster_tol: float, scale: float) -> SpectralDecomposition:
    """Cluster an already computed ascending ``eigh`` output."""
    groups = _cluster(w, cluster_tol * max(1.0, scale))
    values, projs, bases = [], [], []
    for g in groups:
        Ug = U[:, g]
        values.append(float(np.mean(w[g])))
        projs.append(Ug @ Ug.conj().T)
        bases.append(Ug)
    return SpectralDecomposition(np.array(values), tuple(projs), tuple(bases), cluster_tol)


def eig_hermitian(M, cluster_tol: float = CLUSTER_TOL, herm_tol: float = HERM_TOL) -> SpectralDecomposition:
    """Clustered spectral decomposition of a Hermitian matrix.

    Eigenvalues closer than ``cluster_tol * max(1, ||M||_2)`` to their
    neighbour are merged (single linkage); a merged cluster carries the mean
    eigenvalue and the sum of the member projectors.
    """
    M = as_hermitian(M, herm_tol)
    w, U = np.linalg.eigh(M)
    return decompose_eigh(w, U, cluster_tol, float(np.max(np.abs(w))))


def _classify(value, where) -> tuple[bool, float]:
    """Return ``(infinite, finite_value)`` for an extended-real result."""
    if is_inf(value):
        return True, 0.0
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"function returned non-real value {value!r} at {where}") from None
    if math.isnan(v) or v == -math.inf:
        raise DomainError(f"function undefined at {where}")
    if v == math.inf:
        return True, 0.0
    return False, v


def apply_scalar_function(M, phi: Callable[[float], object], cluster_tol: float = CLUSTER_TOL,
                          herm_tol: float = HERM_TOL):
    """Evaluate ``phi(M) = sum_i phi(lambda_i) P_i`` once per eigenvalue cluster.

    ``phi`` may return a float, :data:`~pwcalc.extended.PLUS_INF` (or
    ``math.inf``), or raise :class:`DomainError`. If any cluster evaluates
    to +inf the result is an :class:`ExtendedOperator` whose infinite part
    is the sum of those projectors; otherwise a Hermitian ndarray.
    """
    dec = eig_hermitian(M, cluster_tol, herm_tol)
    n = dec.projectors[0].shape[0]
    F = np.zeros((n, n), dtype=complex)
    K = np.zeros((n, n), dtype=complex)
    any_inf = False
    for lam, P in dec:
        try:
            raw = phi(lam)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"function undefined at eigenvalue {lam!r}: {exc}") from exc
        inf, v = _classify(raw, f"eigenvalue {lam!r}")
        if inf:
            any_inf = True
            K += P
        else:
            F += v * P
    if any_inf:
        return ExtendedOperator(hermitize(F), hermitize(K))
    return hermitize(F)


def commutator_norm(S, T) -> float:
    S = np.asarray(S)
    T = np.asarray(T)
    return opnorm(S @ T - T @ S)


def joint_calculus_commuting(S, T, f: Callable[[float, float], object],
                             cluster_tol: float = CLUSTER_TOL, herm_tol: float = HERM_TOL) -> np.ndarray:
    """Functional calculus of a commuting Hermitian pair via joint projections.

    Computes ``sum_{lambda, mu} f(lambda, mu) P_lambda Q_mu``, skipping the
    pairs for which the joint projection ``P_lambda Q_mu`` vanishes, so ``f``
    only needs to be finite on the joint spectrum.
    """
    S = as_hermitian(S, herm_tol)
    T = as_hermitian(T, herm_tol)
    same_shape(S, T)
    c = commutator_norm(S, T)
    if c > COMMUTE_TOL * (1 + opnorm(S) * opnorm(T)):
        raise NotCommuting(f"||[S,T]||_2 = {c:.3e}")
    dS = eig_hermitian(S, cluster_tol)
    dT = eig_hermitian(T, cluster_tol)
    n = S.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for lam, P in dS:
        for mu, Q in dT:
            E = P @ Q
            # PQ is itself a projector for commuting P, Q: norm is 0 or 1.
            if opnorm(E) < 0.5:
                continue
            inf, v = _classify(f(lam, mu), f"joint eigenvalue ({lam!r}, {mu!r})")
            if inf:
                raise InfiniteValue(f"f(lambda, mu) = +inf at ({lam!r}, {mu!r})")
            out += v * E
    return hermitize(out)


def pinv_power(M, p: float, rank_tol: float = RANK_TOL, herm_tol: float = HERM_TOL) -> np.ndarray:
    """``lambda -> lambda**p`` on eigenvalues above ``rank_tol * ||M||_2``, 0 elsewhere.

    For negative ``p`` this is the power of the Moore-Penrose inverse.
    """
    M = as_hermitian(M, herm_tol)
    w, U = np.linalg.eigh(M)
    norm = float(np.max(np.abs(w)))
    if w[0] < -rank_tol * norm:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} below -rank_tol*||M||")
    keep = w > rank_tol * norm
    Uk = U[:, keep]
    return hermitize((Uk * w[keep] ** p) @ Uk.conj().T)


def similarity_identity_check(S, T, g: Callable[[float], float], herm_tol: float = 1e-9) -> float:
    """Residual ``||g(S^-1 T S) - S^-1 g(T) S||_2`` for invertible ``S``.

    ``S^-1 T S`` must be self-adjoint (to ``herm_tol`` relative), otherwise
    :class:`NotSelfAdjointConjugate` is raised.
    """
    S = np.asarray(S, dtype=complex)
    T = as_hermitian(T)
    try:
        Sinv = np.linalg.inv(S)
    except np.linalg.LinAlgError as exc:
        raise NotSelfAdjointConjugate("S is singular") from exc
    C = Sinv @ T @ S
    if opnorm(C - C.conj().T) > herm_tol * max(1.0, opnorm(C)):
        raise NotSelfAdjointConjugate("S^-1 T S is not self-adjoint")
    lhs = apply_scalar_function(hermitize(C), g)
    gT = apply_scalar_function(T, g)
    if isinstance(lhs, ExtendedOperator) or isinstance(gT, ExtendedOperator):
        raise InfiniteValue("g must be finite on the spectrum")
    return opnorm(lhs - Sinv @ gT @ S)


def numerical_rank(M, rank_tol: float = RANK_TOL) -> int:
    """Number of eigenvalues above ``rank_tol * ||M||_2``."""
    w = np.linalg.eigvalsh(hermitize(M))
    return int(np.sum(w > rank_tol * np.max(np.abs(w))))
