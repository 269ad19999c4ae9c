"""Trace quantities of the extended calculus.

``Tr h(A, B)`` with ``h(r, s) = r log(r/s)`` (a Belavkin-Staszewski type
relative entropy) and the Renyi-type traces ``Tr f_alpha(A, B)``. Both may
be +inf; that is decided structurally from the infinite part of the
spectral sum, never from a floating-point overflow.
"""

from __future__ import annotations

import numpy as np

from .calculus import decompose, pw_apply, pw_apply_extended
from .homfun import entropy_kernel, renyi, weighted_geometric
from .spectral import RANK_TOL, check_psd, opnorm, same_shape

TRACE_INF_TOL = 1e-10


def _extended_trace(A, B, fn, rank_tol, trace_inf_tol):
    A = check_psd(A, rank_tol, what="A")
    B = check_psd(B, rank_tol, what="B")
    same_shape(A, B)
    dec = decompose(A, B, rank_tol)
    ext = pw_apply_extended(A, B, fn, dec=dec)
    return ext.trace(trace_inf_tol * opnorm(A + B))


def bs_relative_entropy(A, B, rank_tol: float = RANK_TOL, trace_inf_tol: float = TRACE_INF_TOL):
    """``Tr h(A, B)``, equal to ``Tr A log(A^{1/2} B^{-1} A^{1/2})`` for invertible pairs.

    Returns :data:`~pwcalc.extended.PLUS_INF` exactly when
    ``Ker B != Ker(A + B)``.
    """
    return _extended_trace(A, B, entropy_kernel(), rank_tol, trace_inf_tol)


def renyi_trace(A, B, alpha: float, rank_tol: float = RANK_TOL, trace_inf_tol: float = TRACE_INF_TOL):
    """``Tr f_alpha(A, B)`` with ``f_alpha(r, s) = r^{1-alpha} s^alpha``, ``0 < alpha <= 2``.

    +inf exactly when ``alpha > 1`` and ``Ker A != Ker(A + B)``.
    """
    return _extended_trace(A, B, renyi(alpha), rank_tol, trace_inf_tol)


def weighted_mean(A, B, alpha: float, rank_tol: float = RANK_TOL) -> np.ndarray:
    """The weighted geometric mean ``A #_alpha B`` for ``0 < alpha < 1``."""
    return pw_apply(A, B, weighted_geometric(alpha), rank_tol)
