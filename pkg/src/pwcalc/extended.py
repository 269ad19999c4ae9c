"""Extended reals and generalized positive operators.

``+inf`` never appears inside matrix entries. Scalars use the
:data:`PLUS_INF` sentinel; operators use :class:`ExtendedOperator`, which
stores the directions carrying an infinite coefficient separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class _PlusInfinity:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "PLUS_INF"

    def __str__(self):
        return "+inf"

    def __float__(self):
        return math.inf

    def __reduce__(self):
        return (_PlusInfinity, ())

    def _scale(self, other):
        if isinstance(other, _PlusInfinity):
            return self
        other = float(other)
        if other > 0:
            return self
        if other == 0:
            # 0 * inf := 0, the measure-theoretic convention.
            return 0.0
        raise ValueError("negative multiple of +inf is not an extended nonnegative value")

    def __mul__(self, other):
        return self._scale(other)

    __rmul__ = __mul__

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("PLUS_INF")

    def __gt__(self, other):
        return other is not self

    def __lt__(self, other):
        return False


PLUS_INF = _PlusInfinity()


def is_inf(x) -> bool:
    """True for the +inf sentinel only; IEEE infinities are not accepted."""
    return x is PLUS_INF


def format_extended(x) -> str:
    """Decimal with 17 significant digits, or the token ``+inf``."""
    if is_inf(x):
        return "+inf"
    return format(float(x), ".17g")


@dataclass(frozen=True, eq=False)
class ExtendedOperator:
    """The generalized positive operator ``F + inf * K``.

    ``F`` is the Hermitian finite part and ``K`` a PSD matrix spanning the
    directions with coefficient ``+inf``. ``K`` is zero iff the operator is
    an honest matrix.
    """

    F: np.ndarray
    K: np.ndarray

    @property
    def dim(self) -> int:
        return self.F.shape[0]

    def infinite_norm(self) -> float:
        return float(np.linalg.norm(self.K, 2)) if self.K.size else 0.0

    def is_finite(self, tol: float = 0.0) -> bool:
        return self.infinite_norm() <= tol

    def trace(self, inf_tol: float = 0.0):
        """``Tr F`` when ``K`` vanishes (``||K||_2 <= inf_tol``), else +inf."""
        if not self.is_finite(inf_tol):
            return PLUS_INF
        return float(np.trace(self.F).real)
