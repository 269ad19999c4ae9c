"""Alternative ways of computing ``f(A, B)``.

The operator-perspective formulas need one invertible argument, the
regularized route ``f(A + e1 I, B + e2 I)`` needs neither, and the parallel
sum has its classical closed form. They are used to cross-check
:func:`~pwcalc.calculus.pw_apply`.
"""

from __future__ import annotations

import numpy as np

from .calculus import INV_TOL, numerically_invertible, pw_apply
from .errors import BadParameter, FunctionNotContinuous, InfiniteValue, NotInvertible
from .extended import ExtendedOperator
from .homfun import HomogeneousFunction, eval_f
from .spectral import RANK_TOL, apply_scalar_function, as_hermitian, check_psd, hermitize, opnorm, same_shape

DEFAULT_EPS_GRID = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


def _sqrt_and_inv_sqrt(M):
    w, U = np.linalg.eigh(M)
    s = np.sqrt(w)
    return hermitize((U * s) @ U.conj().T), hermitize((U / s) @ U.conj().T)


def _perspective(P, Q, phi, fn_name):
    """``P^{1/2} phi(P^{-1/2} Q P^{-1/2}) P^{1/2}``."""
    half, inv_half = _sqrt_and_inv_sqrt(P)
    T = hermitize(inv_half @ Q @ inv_half)
    mid = apply_scalar_function(T, phi)
    if isinstance(mid, ExtendedOperator):
        raise InfiniteValue(f"{fn_name} is +inf on the spectrum of the perspective argument")
    return hermitize(half @ mid @ half)


def _prepare(A, B, rank_tol):
    A = check_psd(A, rank_tol, what="A")
    B = check_psd(B, rank_tol, what="B")
    same_shape(A, B)
    return A, B


def perspective_left(A, B, fn: HomogeneousFunction, inv_tol: float = INV_TOL,
                     rank_tol: float = RANK_TOL) -> np.ndarray:
    """``A^{1/2} f(1, A^{-1/2} B A^{-1/2}) A^{1/2}`` for numerically invertible ``A``."""
    A, B = _prepare(A, B, rank_tol)
    if not numerically_invertible(A, inv_tol):
        raise NotInvertible("perspective_left needs A invertible")
    # The argument is PSD by construction; clip round-off below zero.
    return _perspective(A, B, lambda t: eval_f(fn, 1.0, max(t, 0.0)), fn.name)


def perspective_right(A, B, fn: HomogeneousFunction, inv_tol: float = INV_TOL,
                      rank_tol: float = RANK_TOL) -> np.ndarray:
    """``B^{1/2} f(B^{-1/2} A B^{-1/2}, 1) B^{1/2}``, the operator perspective
    ``P_g(A, B)`` with ``g(t) = f(t, 1)``."""
    A, B = _prepare(A, B, rank_tol)
    if not numerically_invertible(B, inv_tol):
        raise NotInvertible("perspective_right needs B invertible")
    return _perspective(B, A, lambda t: eval_f(fn, max(t, 0.0), 1.0), fn.name)


def epsilon_regularized(A, B, fn: HomogeneousFunction, eps1: float, eps2: float,
                        rank_tol: float = RANK_TOL) -> np.ndarray:
    """``f(A + eps1 I, B + eps2 I)`` through :func:`pw_apply`."""
    if eps1 < 0 or eps2 < 0 or not eps1 + eps2 > 0:
        raise BadParameter(f"need eps1, eps2 >= 0 with a positive sum, got ({eps1}, {eps2})")
    A, B = _prepare(A, B, rank_tol)
    eye = np.eye(A.shape[0])
    return pw_apply(A + eps1 * eye, B + eps2 * eye, fn, rank_tol)


def limit_study(A, B, fn: HomogeneousFunction, eps_grid=DEFAULT_EPS_GRID, ratio: float = 1.0,
                rank_tol: float = RANK_TOL) -> list[tuple[float, float]]:
    """Distance from the regularized route to ``f(A, B)`` along ``eps_grid``.

    Each point uses ``(eps1, eps2) = (eps, ratio * eps)`` and reports
    ``||f(A + eps1 I, B + eps2 I) - f(A, B)||_2``. Report only: no
    convergence rate is implied.
    """
    if not fn.continuous_on_closed:
        raise FunctionNotContinuous(f"{fn.name} is not continuous on the closed quadrant")
    exact = pw_apply(A, B, fn, rank_tol)
    return [(float(e), opnorm(epsilon_regularized(A, B, fn, e, ratio * e, rank_tol) - exact))
            for e in eps_grid]


def parallel_sum_direct(A, B, inv_tol: float = INV_TOL) -> np.ndarray:
    """Closed form ``A (A + B)^{-1} B`` of the parallel sum."""
    A = as_hermitian(A)
    B = as_hermitian(B)
    same_shape(A, B)
    if not (numerically_invertible(A, inv_tol) and numerically_invertible(B, inv_tol)):
        raise NotInvertible("parallel_sum_direct needs A and B invertible")
    return hermitize(A @ np.linalg.solve(A + B, B))


def parallel_sum_inverse_form(A, B, inv_tol: float = INV_TOL) -> np.ndarray:
    """``(A^{-1} + B^{-1})^{-1}``."""
    A = as_hermitian(A)
    B = as_hermitian(B)
    same_shape(A, B)
    if not (numerically_invertible(A, inv_tol) and numerically_invertible(B, inv_tol)):
        raise NotInvertible("parallel_sum_inverse_form needs A and B invertible")
    return hermitize(np.linalg.inv(np.linalg.inv(A) + np.linalg.inv(B)))


def is_nonincreasing(curve, atol: float = 0.0) -> bool:
    """True if the errors of a :func:`limit_study` curve never grow by more than ``atol``."""
    errs = [e for _, e in curve]
    return all(b <= a + atol for a, b in zip(errs, errs[1:]))
