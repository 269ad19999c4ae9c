"""Empirical checks of joint operator convexity.

The checks are one-sided. ``passed=True`` only means no violation was seen;
a recorded :class:`Witness` is a numerically re-validated counterexample.

Sign conventions: for ``direction="convex"`` the slack matrix must be PSD
(margin = its smallest eigenvalue); for ``"concave"`` the slack is negated
first. A check passes when ``margin >= -tol * (1 + ||slack||_2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .calculus import numerically_invertible, pw_apply
from .errors import BadParameter, BadWeights, DimensionMismatch, PreconditionViolation, SpectrumOutOfInterval
from .homfun import OPEN, HomogeneousFunction
from .sampling import (
    random_contraction,
    random_hermitian_with_spectrum,
    random_isometry,
    random_psd,
    trial_rng,
)
from .spectral import apply_scalar_function, check_psd, hermitize, opnorm, same_shape

CONVEX = "convex"
CONCAVE = "concave"
ISOMETRY_TOL = 1e-10


@dataclass
class Witness:
    """Matrices that reproduce a violation, plus the seed that generated them."""

    kind: str
    matrices: dict
    margin: float
    direction: str = CONVEX
    seed: tuple | None = None
    weights: tuple | None = None


@dataclass
class CheckResult:
    passed: bool
    margin: float
    direction: str = CONVEX
    tol: float = 1e-8
    trials: int = 1
    witness: Witness | None = None
    extra: dict = field(default_factory=dict)


def _direction(direction):
    if direction not in (CONVEX, CONCAVE):
        raise BadParameter(f"direction must be 'convex' or 'concave', got {direction!r}")
    return direction


def _margin(slack, direction, tol):
    slack = hermitize(slack)
    signed = slack if direction == CONVEX else -slack
    margin = float(np.linalg.eigvalsh(signed)[0])
    return margin, margin >= -tol * (1 + opnorm(slack))


def needs_invertible_setting(fn: HomogeneousFunction) -> bool:
    """Functions off the finite closed quadrant are only checked on invertible
    pairs compressed by isometries."""
    return fn.domain == OPEN or not fn.is_finite


def is_isometry(V, tol=ISOMETRY_TOL) -> bool:
    k = V.shape[1]
    return opnorm(V.conj().T @ V - np.eye(k)) <= tol


def transformer_slack(fn: HomogeneousFunction, A, B, V):
    """``V^* f(A, B) V - f(V^* A V, V^* B V)``."""
    Vh = V.conj().T
    compressed = pw_apply(hermitize(Vh @ A @ V), hermitize(Vh @ B @ V), fn)
    return hermitize(Vh @ pw_apply(A, B, fn) @ V - compressed)


def transformer_check(fn: HomogeneousFunction, A, B, V, direction: str = CONVEX,
                      tol: float = 1e-8) -> CheckResult:
    """Test ``f(V^* A V, V^* B V) <= V^* f(A, B) V`` (reversed if concave).

    ``V`` maps the small space into the space of ``A`` and ``B`` (shape
    ``n x k``). Finite closed-quadrant functions accept any bounded ``V``;
    the others need ``V`` to be an isometry and ``A``, ``B`` invertible.
    """
    direction = _direction(direction)
    A = check_psd(A, what="A")
    B = check_psd(B, what="B")
    same_shape(A, B)
    V = np.asarray(V, dtype=complex)
    if V.ndim != 2 or V.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"V must have {A.shape[0]} rows, got shape {V.shape}")
    if needs_invertible_setting(fn):
        if not is_isometry(V):
            raise PreconditionViolation(f"{fn.name} requires an isometry V")
        if not (numerically_invertible(A) and numerically_invertible(B)):
            raise PreconditionViolation(f"{fn.name} requires invertible A and B")
    slack = transformer_slack(fn, A, B, V)
    margin, passed = _margin(slack, direction, tol)
    witness = None
    if not passed:
        witness = Witness("transformer", {"A": A, "B": B, "V": V}, margin, direction)
    return CheckResult(passed, margin, direction, tol, witness=witness)


def joint_convexity_check(fn: HomogeneousFunction, pairs: Sequence, weights: Sequence[float],
                          direction: str = CONVEX, tol: float = 1e-8) -> CheckResult:
    """Test ``f(sum w_i A_i, sum w_i B_i) <= sum w_i f(A_i, B_i)`` directly."""
    direction = _direction(direction)
    weights = np.asarray(weights, dtype=float)
    if len(pairs) == 0 or len(weights) != len(pairs):
        raise BadWeights("need one weight per pair")
    if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise BadWeights("weights must be nonnegative and sum to one")
    checked = []
    for A, B in pairs:
        A = check_psd(A, what="A")
        B = check_psd(B, what="B")
        same_shape(A, B)
        checked.append((A, B))
    same_shape(*[A for A, _ in checked])
    avg_A = sum(w * A for w, (A, _) in zip(weights, checked))
    avg_B = sum(w * B for w, (_, B) in zip(weights, checked))
    combo = sum(w * pw_apply(A, B, fn) for w, (A, B) in zip(weights, checked))
    slack = hermitize(combo - pw_apply(avg_A, avg_B, fn))
    margin, passed = _margin(slack, direction, tol)
    witness = None
    if not passed:
        mats = {}
        for i, (A, B) in enumerate(checked):
            mats[f"A{i}"] = A
            mats[f"B{i}"] = B
        witness = Witness("joint", mats, margin, direction, weights=tuple(weights.tolist()))
    return CheckResult(passed, margin, direction, tol, witness=witness)


def embed_transformer_witness(A, B, V):
    """Turn a transformer instance into a two-point joint-convexity instance.

    With the reflection ``W = 2 V V^* - I`` the average of ``(A, B)`` and
    ``(W A W, W B W)`` is the pinching of the pair onto ``ran V``; its
    joint-convexity slack compresses (by ``V``) to the transformer slack, so
    the joint margin can only be smaller.
    """
    V = np.asarray(V, dtype=complex)
    W = 2 * V @ V.conj().T - np.eye(V.shape[0])
    pairs = [(A, B), (hermitize(W @ A @ W), hermitize(W @ B @ W))]
    return pairs, (0.5, 0.5)


def section_operator_convexity_scan(psi: Callable[[float], float], interval, dim: int, trials: int,
                                    seed: int, tol: float = 1e-10) -> CheckResult:
    """Random search for a midpoint violation ``psi((X+Y)/2) <= (psi(X)+psi(Y))/2``.

    ``X`` and ``Y`` are random Hermitian ``dim x dim`` matrices with
    spectra drawn uniformly from the open ``interval``. Reports the worst
    margin over all trials and the first violating pair.
    """
    a, b = map(float, interval)
    if not a < b:
        raise BadParameter(f"empty interval {interval!r}")
    if dim < 2:
        raise BadParameter("dim must be at least 2")
    width = b - a
    lo, hi = a + 1e-9 * width, b - 1e-9 * width
    worst = np.inf
    witness = None
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        X = random_hermitian_with_spectrum(rng, rng.uniform(lo, hi, dim))
        Y = random_hermitian_with_spectrum(rng, rng.uniform(lo, hi, dim))
        for M in (X, Y):
            w = np.linalg.eigvalsh(M)
            if w[0] <= a or w[-1] >= b:
                raise SpectrumOutOfInterval(f"generated spectrum [{w[0]}, {w[-1]}] leaves {interval!r}")
        margin, ok = _section_margin(psi, X, Y, tol)
        worst = min(worst, margin)
        if not ok and witness is None:
            witness = Witness("section", {"X": X, "Y": Y}, margin, CONVEX, seed=(int(seed), trial))
    return CheckResult(witness is None, float(worst), CONVEX, tol, trials=trials, witness=witness)


def _section_margin(psi, X, Y, tol):
    mid = apply_scalar_function(hermitize((X + Y) / 2), psi)
    slack = (apply_scalar_function(X, psi) + apply_scalar_function(Y, psi)) / 2 - mid
    return _margin(slack, CONVEX, tol)


def falsify_transformer(fn: HomogeneousFunction, dims: Sequence[int], trials: int, seed: int,
                        tol: float = 1e-8, direction: str = CONVEX) -> CheckResult:
    """Random search for a transformer-inequality violation.

    Trial ``i`` works in dimension ``n = dims[i % len(dims)]`` with a random
    isometry ``C^k -> C^n``, ``1 <= k < n`` (a unitary ``V`` can never
    violate the inequality). Stops at the first violation.
    """
    direction = _direction(direction)
    dims = [int(d) for d in dims]
    if not dims or min(dims) < 2:
        raise BadParameter("every dimension must be at least 2")
    mu = 0.1 if needs_invertible_setting(fn) else 0.0
    worst = np.inf
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        A, B, V = _transformer_instance(rng, dims[trial % len(dims)], mu)
        res = transformer_check(fn, A, B, V, direction, tol)
        worst = min(worst, res.margin)
        if not res.passed:
            res.witness.seed = (int(seed), trial)
            return CheckResult(False, res.margin, direction, tol, trials=trial + 1, witness=res.witness)
    return CheckResult(True, float(worst), direction, tol, trials=trials)


def _transformer_instance(rng, n, mu, contraction=False):
    A = random_psd(rng, n, mu)
    B = random_psd(rng, n, mu)
    if contraction:
        return A, B, random_contraction(rng, n, int(rng.integers(1, n + 1)))
    k = int(rng.integers(1, n))
    return A, B, random_isometry(rng, n, k)


def transformer_suite(fn: HomogeneousFunction, dims: Sequence[int], trials: int, seed: int,
                      direction: str = CONVEX, tol: float = 1e-8) -> CheckResult:
    """Run :func:`transformer_check` on ``trials`` random instances per dimension.

    Finite closed-quadrant functions are tested with random contractions,
    the others with random isometries on invertible pairs. Unlike
    :func:`falsify_transformer` every trial is run; the worst margin and the
    first witness are kept.
    """
    direction = _direction(direction)
    invertible = needs_invertible_setting(fn)
    mu = 0.1 if invertible else 0.0
    worst = np.inf
    witness = None
    count = 0
    for d_index, n in enumerate(dims):
        for i in range(trials):
            trial = d_index * trials + i
            rng = trial_rng(seed, trial)
            A, B, V = _transformer_instance(rng, int(n), mu, contraction=not invertible)
            res = transformer_check(fn, A, B, V, direction, tol)
            count += 1
            worst = min(worst, res.margin)
            if not res.passed and witness is None:
                witness = res.witness
                witness.seed = (int(seed), trial)
    return CheckResult(witness is None, float(worst), direction, tol, trials=count, witness=witness)


def revalidate(fn: HomogeneousFunction, witness: Witness, psi: Callable | None = None) -> float:
    """Recompute a witness margin from its stored matrices."""
    m = witness.matrices
    if witness.kind == "transformer":
        return transformer_check(fn, m["A"], m["B"], m["V"], witness.direction).margin
    if witness.kind == "joint":
        count = len(witness.weights)
        pairs = [(m[f"A{i}"], m[f"B{i}"]) for i in range(count)]
        return joint_convexity_check(fn, pairs, witness.weights, witness.direction).margin
    if witness.kind == "section":
        if psi is None:
            psi = fn.section
        return _section_margin(psi, m["X"], m["Y"], 0.0)[0]
    raise BadParameter(f"unknown witness kind {witness.kind!r}")
