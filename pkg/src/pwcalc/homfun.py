"""Homogeneous functions of two nonnegative variables.

A homogeneous ``f(r, s)`` is stored through its section
``psi(t) = f(t, 1 - t)`` on ``[0, 1]`` and recovered as
``f(r, s) = (r + s) * psi(r / (r + s))`` with ``f(0, 0) = 0``. Homogeneity
is therefore structural rather than assumed.

Section values are floats or :data:`~pwcalc.extended.PLUS_INF`; a section
that is undefined at a point raises :class:`~pwcalc.errors.DomainError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import BadParameter, DomainError, UnknownName
from .extended import PLUS_INF, is_inf

CLOSED = "closed_quadrant"
OPEN = "open_quadrant"


@dataclass(frozen=True)
class HomogeneousFunction:
    """A homogeneous Borel function carried by its section ``psi``.

    Attributes
    ----------
    psi : callable
        ``t -> f(t, 1 - t)`` on ``[0, 1]``.
    name : str
        Catalogue name, used by reports.
    domain : {"closed_quadrant", "open_quadrant"}
        Open-quadrant functions are only defined for ``r, s > 0`` unless a
        boundary value is declared in ``psi``.
    continuous_on_closed : bool
        Whether ``f`` is a finite continuous function on ``[0, inf)^2``.
    infinite_at : frozenset
        Section endpoints (``0.0`` and/or ``1.0``) where ``psi`` is +inf.
    params : dict
        Parameters the function was built from, echoed in reports.
    """

    psi: Callable[[float], object] = field(compare=False)
    name: str
    domain: str = CLOSED
    continuous_on_closed: bool = True
    infinite_at: frozenset = frozenset()
    params: tuple = ()

    @property
    def is_finite(self) -> bool:
        return not self.infinite_at

    def section(self, t: float):
        """``psi(t)``; raises :class:`DomainError` outside ``[0, 1]``."""
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"{self.name}: section argument {t!r} outside [0, 1]")
        try:
            return self.psi(t)
        except DomainError:
            raise
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"{self.name}: undefined at t={t!r}") from exc

    def __call__(self, r: float, s: float):
        return eval_f(self, r, s)

    def describe(self) -> dict:
        return {"name": self.name, "params": dict(self.params)}


def eval_f(fn: HomogeneousFunction, r: float, s: float):
    """``f(r, s) = (r + s) * psi(r / (r + s))`` for ``r + s > 0``, and 0 at the origin."""
    r = float(r)
    s = float(s)
    if r < 0 or s < 0 or math.isnan(r) or math.isnan(s):
        raise DomainError(f"{fn.name}: ({r!r}, {s!r}) is outside the quadrant")
    total = r + s
    if total == 0.0:
        return 0.0
    value = fn.section(r / total)
    if is_inf(value):
        return PLUS_INF
    return total * float(value)


def _boundary(name, value, t):
    if value is None:
        raise DomainError(f"{name}: no boundary value declared at t={t}")
    return value


def _renyi_section(alpha):
    def psi(t):
        if t == 0.0:
            # f(0, s) = 0**(1 - alpha) * s**alpha
            if alpha > 1:
                return PLUS_INF
            return 1.0 if alpha == 1 else 0.0
        if t == 1.0:
            return 0.0
        return t ** (1 - alpha) * (1 - t) ** alpha

    return psi


def weighted_geometric(alpha: float = 0.5) -> HomogeneousFunction:
    """``r**(1 - alpha) * s**alpha`` for ``alpha`` in ``(0, 1)``."""
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise BadParameter(f"weighted_geometric needs 0 < alpha < 1, got {alpha}")
    return HomogeneousFunction(_renyi_section(alpha), "weighted_geometric", params=(("alpha", alpha),))


def renyi(alpha: float) -> HomogeneousFunction:
    """``f_alpha(r, s) = r**(1 - alpha) * s**alpha`` for ``alpha`` in ``(0, 2]``.

    For ``alpha > 1`` the value on the line ``r = 0`` (``s > 0``) is +inf.
    """
    alpha = float(alpha)
    if not 0 < alpha <= 2:
        raise BadParameter(f"renyi needs 0 < alpha <= 2, got {alpha}")
    singular = alpha > 1
    return HomogeneousFunction(
        _renyi_section(alpha),
        "renyi",
        continuous_on_closed=not singular,
        infinite_at=frozenset({0.0}) if singular else frozenset(),
        params=(("alpha", alpha),),
    )


def parallel_sum() -> HomogeneousFunction:
    """``rs / (r + s)`` with ``0/0 := 0``."""
    return HomogeneousFunction(lambda t: t * (1 - t), "parallel_sum")


def arithmetic() -> HomogeneousFunction:
    return HomogeneousFunction(lambda t: 0.5, "arithmetic")


def left() -> HomogeneousFunction:
    return HomogeneousFunction(lambda t: t, "left")


def right() -> HomogeneousFunction:
    return HomogeneousFunction(lambda t: 1 - t, "right")


def _entropy_section(t):
    if t == 0.0:
        return 0.0
    if t == 1.0:
        return PLUS_INF
    return t * (math.log(t) - math.log1p(-t))


def entropy_kernel() -> HomogeneousFunction:
    """``h(r, s) = r log(r / s)``: ``h(0, s) = 0`` and ``h(r, 0) = +inf`` for ``r > 0``."""
    return HomogeneousFunction(
        _entropy_section,
        "entropy_kernel",
        continuous_on_closed=False,
        infinite_at=frozenset({1.0}),
    )


def perspective_of(g: Callable[[float], float], at_zero=None, at_one=None,
                   label: str = "g") -> HomogeneousFunction:
    """The perspective ``f(r, s) = s * g(r / s)`` on the open quadrant.

    ``at_zero`` is the declared value ``f(0, 1)`` and ``at_one`` the value
    ``f(1, 0)`` (possibly ``PLUS_INF``). Without both, the function stays
    on the open quadrant.
    """

    def psi(t):
        if t == 0.0:
            return _boundary(f"perspective_of({label})", at_zero, 0)
        if t == 1.0:
            return _boundary(f"perspective_of({label})", at_one, 1)
        return (1 - t) * g(t / (1 - t))

    infinite = frozenset(t for t, v in ((0.0, at_zero), (1.0, at_one)) if is_inf(v))
    closed = at_zero is not None and at_one is not None
    return HomogeneousFunction(
        psi,
        "perspective_of",
        domain=CLOSED if closed else OPEN,
        continuous_on_closed=False,
        infinite_at=infinite,
        params=(("g", label),),
    )


def power_perspective(p: float) -> HomogeneousFunction:
    """``perspective_of(t -> t**p)``, i.e. ``r**p / s**(p - 1)``."""
    p = float(p)
    return perspective_of(lambda t: t**p, label=f"t^{_fmt(p)}")


def _fmt(x):
    return format(x, "g")


def rescale(fn: HomogeneousFunction, a: float, b: float) -> HomogeneousFunction:
    """``g(r, s) = f(r / a, s / b)``, homogeneous again; ``f(A, B) = g(aA, bB)``."""
    a = float(a)
    b = float(b)
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise BadParameter(f"rescale needs a, b > 0, got ({a}, {b})")

    def psi(t):
        return eval_f(fn, t / a, (1 - t) / b)

    return HomogeneousFunction(
        psi,
        f"rescale({fn.name})",
        domain=fn.domain,
        continuous_on_closed=fn.continuous_on_closed,
        infinite_at=fn.infinite_at,
        params=fn.params + (("a", a), ("b", b)),
    )


def _parse_g(spec: str):
    """Small grammar for CLI perspectives: ``t^p``, ``t``, ``tlogt``, ``-logt``."""
    s = spec.replace(" ", "").replace("**", "^")
    if s in ("tlogt", "t*log(t)", "tlog(t)"):
        return (lambda t: t * math.log(t)), "tlogt"
    if s in ("-logt", "-log(t)"):
        return (lambda t: -math.log(t)), "-logt"
    if s == "t":
        return (lambda t: t), "t"
    if s.startswith("t^"):
        try:
            p = float(s[2:])
        except ValueError:
            raise BadParameter(f"cannot parse exponent in {spec!r}") from None
        if not math.isfinite(p):
            raise BadParameter(f"exponent must be finite in {spec!r}")
        return (lambda t: t**p), f"t^{_fmt(p)}"
    raise BadParameter(f"unsupported perspective generator {spec!r}")


CATALOGUE_NAMES = (
    "weighted_geometric",
    "geometric",
    "renyi",
    "parallel_sum",
    "arithmetic",
    "left",
    "right",
    "entropy_kernel",
    "perspective_of",
)


def catalogue(name: str, alpha: float | None = None, g=None) -> HomogeneousFunction:
    """Look up a catalogue function by name.

    ``alpha`` parametrizes ``weighted_geometric``/``geometric`` (default 1/2)
    and ``renyi`` (required). ``g`` is a callable or a CLI generator string
    (``"t^2"``, ``"tlogt"``, ``"-logt"``) for ``perspective_of``.
    """
    if name in ("weighted_geometric", "geometric"):
        return weighted_geometric(0.5 if alpha is None else alpha)
    if name == "renyi":
        if alpha is None:
            raise BadParameter("renyi requires alpha")
        return renyi(alpha)
    if name == "parallel_sum":
        return parallel_sum()
    if name == "arithmetic":
        return arithmetic()
    if name == "left":
        return left()
    if name == "right":
        return right()
    if name == "entropy_kernel":
        return entropy_kernel()
    if name == "perspective_of":
        if g is None:
            raise BadParameter("perspective_of requires g")
        if isinstance(g, str):
            func, label = _parse_g(g)
            return perspective_of(func, label=label)
        return perspective_of(g)
    raise UnknownName(f"unknown function {name!r}; known: {', '.join(CATALOGUE_NAMES)}")
