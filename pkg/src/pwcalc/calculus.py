"""Two-variable functional calculus ``f(A, B)`` for PSD pairs.

With ``H0 = Ker(A + B)`` and ``H1`` its complement, the pair is carried
by the commuting contractions ``R = (A+B)^{-1/2} A (A+B)^{-1/2}`` and
``S = I - P0 - R`` (partial inverse on ``H1``, ``R = S = 0`` on ``H0``).
Then

    f(A, B) = (A+B)^{1/2} f(R, S) (A+B)^{1/2}
            = sum_{lambda in sigma(R|H1)} psi(lambda) (A+B)^{1/2} P_lambda (A+B)^{1/2},

since ``f(R, S) = psi(R)`` on ``H1``. ``H0`` contributes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfiniteValue, NotInvertible
from .extended import ExtendedOperator
from .homfun import OPEN, HomogeneousFunction
from .spectral import (
    CLUSTER_TOL,
    HERM_TOL,
    RANK_TOL,
    _classify,
    _cluster,
    check_psd,
    hermitize,
    same_shape,
)

INV_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class PWDecomposition:
    """Canonical data of a pair ``(A, B)``.

    ``r_values`` are the clustered eigenvalues of ``R`` restricted to
    ``H1`` (each in ``[0, 1]``) and ``r_factors[i]`` is
    ``(A+B)^{1/2} W_i`` for an orthonormal basis ``W_i`` of the matching
    eigenspace, so that ``(A+B)^{1/2} P_i (A+B)^{1/2} = r_factors[i] @ r_factors[i]^*``.
    """

    P0: np.ndarray
    sum_sqrt: np.ndarray
    sum_pinv_sqrt: np.ndarray
    R: np.ndarray
    S: np.ndarray
    rank_tol: float
    r_values: np.ndarray
    r_projectors: tuple
    r_factors: tuple

    @property
    def dim(self) -> int:
        return self.P0.shape[0]

    @property
    def kernel_rank(self) -> int:
        return int(round(np.trace(self.P0).real))

    def congruence(self, i: int) -> np.ndarray:
        C = self.r_factors[i]
        return C @ C.conj().T


def decompose(A, B, rank_tol: float = RANK_TOL, cluster_tol: float = CLUSTER_TOL,
              herm_tol: float = HERM_TOL) -> PWDecomposition:
    """Kernel splitting and ``R``/``S`` operators of a PSD pair.

    Eigenvalues of ``A + B`` at or below ``rank_tol * ||A + B||_2`` span
    ``H0``. Eigenvalues of ``R`` on ``H1`` are clipped to ``[0, 1]``, and
    clusters within ``cluster_tol`` of an endpoint are pinned to it, so that
    exact kernels of ``A`` or ``B`` inside ``H1`` are seen as ``0`` or ``1``.
    """
    A = check_psd(A, rank_tol, herm_tol, "A")
    B = check_psd(B, rank_tol, herm_tol, "B")
    same_shape(A, B)
    n = A.shape[0]
    w, U = np.linalg.eigh(hermitize(A + B))
    norm = float(np.max(np.abs(w)))
    keep = w > rank_tol * norm
    U1, d = U[:, keep], w[keep]
    U0 = U[:, ~keep]
    P0 = hermitize(U0 @ U0.conj().T)
    sqrt_d = np.sqrt(d)
    sum_sqrt = hermitize((U1 * sqrt_d) @ U1.conj().T)
    sum_pinv_sqrt = hermitize((U1 / sqrt_d) @ U1.conj().T)

    eye = np.eye(n, dtype=complex)
    if not keep.any():
        zero = np.zeros((n, n), dtype=complex)
        return PWDecomposition(P0, sum_sqrt, sum_pinv_sqrt, zero, zero.copy(), rank_tol,
                               np.zeros(0), (), ())

    # R compressed to H1, in the eigenbasis of A + B.
    R1 = (U1.conj().T @ A @ U1) / np.outer(sqrt_d, sqrt_d)
    r, W = np.linalg.eigh(hermitize(R1))
    r = np.clip(r, 0.0, 1.0)
    r[r <= cluster_tol] = 0.0
    r[r >= 1.0 - cluster_tol] = 1.0
    V = U1 @ W
    R = hermitize((V * r) @ V.conj().T)
    S = hermitize(eye - P0 - R)

    groups = _cluster(r, cluster_tol)
    values, projs, factors = [], [], []
    for g in groups:
        Vg = V[:, g]
        vals = r[g]
        if vals[0] == 0.0 or vals[-1] == 1.0:
            values.append(float(vals[0] if vals[0] == 0.0 else 1.0))
        else:
            values.append(float(np.mean(vals)))
        projs.append(Vg @ Vg.conj().T)
        factors.append(sum_sqrt @ Vg)
    return PWDecomposition(P0, sum_sqrt, sum_pinv_sqrt, R, S, rank_tol,
                           np.array(values), tuple(projs), tuple(factors))


def numerically_invertible(M, inv_tol: float = INV_TOL) -> bool:
    w = np.linalg.eigvalsh(hermitize(M))
    return bool(w[0] > inv_tol * max(abs(w[0]), abs(w[-1])))


def _spectral_sum(dec: PWDecomposition, fn: HomogeneousFunction):
    n = dec.dim
    F = np.zeros((n, n), dtype=complex)
    K = np.zeros((n, n), dtype=complex)
    infinite = []
    for i, lam in enumerate(dec.r_values):
        inf, v = _classify(fn.section(float(lam)), f"{fn.name} section at {lam!r}")
        G = dec.congruence(i)
        if inf:
            infinite.append(float(lam))
            K += G
        else:
            F += v * G
    return hermitize(F), hermitize(K), infinite


def pw_apply(A, B, fn: HomogeneousFunction, rank_tol: float = RANK_TOL, inv_tol: float = INV_TOL,
             dec: PWDecomposition | None = None) -> np.ndarray:
    """``f(A, B) = (A+B)^{1/2} f(R, S) (A+B)^{1/2}`` as a Hermitian matrix.

    Parameters
    ----------
    A, B : array_like
        PSD matrices of equal shape.
    fn : HomogeneousFunction
        Must be finite on ``{(lambda, 1 - lambda) : lambda in sigma(R|H1)}``.
    rank_tol : float
        Numerical rank threshold for ``Ker(A + B)``.
    inv_tol : float
        Invertibility gate applied to both ``A`` and ``B`` when ``fn`` only
        lives on the open quadrant.
    dec : PWDecomposition, optional
        Precomputed decomposition of ``(A, B)``.

    Raises
    ------
    InfiniteValue
        When some cluster of ``R`` hits a +inf section value; use
        :func:`pw_apply_extended` instead.
    NotInvertible
        For open-quadrant functions on a singular pair.
    """
    if dec is None:
        dec = decompose(A, B, rank_tol)
    if fn.domain == OPEN:
        for M, label in ((A, "A"), (B, "B")):
            if not numerically_invertible(M, inv_tol):
                raise NotInvertible(f"{fn.name} lives on the open quadrant; {label} is singular")
    F, K, infinite = _spectral_sum(dec, fn)
    if infinite:
        raise InfiniteValue(f"{fn.name} is +inf on the clusters {infinite} of R")
    return F


def pw_apply_extended(A, B, fn: HomogeneousFunction, rank_tol: float = RANK_TOL,
                      dec: PWDecomposition | None = None) -> ExtendedOperator:
    """The spectral sum with +inf coefficients kept as a separate PSD part.

    Returns ``F + inf * K`` where ``K`` collects
    ``(A+B)^{1/2} P_lambda (A+B)^{1/2}`` over clusters with
    ``psi(lambda) = +inf``. For finite ``fn``, ``K = 0`` and ``F`` equals
    :func:`pw_apply`.
    """
    if dec is None:
        dec = decompose(A, B, rank_tol)
    F, K, _ = _spectral_sum(dec, fn)
    return ExtendedOperator(F, K)
