"""T-norm catalog and exact evaluation.

The closed catalog consists of the six kinds of t-norm that admit a
companion function F satisfying T(l*x, l*y) = F(l, T(x, y)) for all
l, x, y in [0, 1], together with each kind's companion:

    Minimum          T = min(x, y)                            F = x*y
    SchweizerSklar   T = (max(x^b + y^b - 1, 0))^(1/b), b>0   F = same with y -> x*y
      (b > 0)          on (0,1]^2, 0 otherwise
    Product          T = x*y                                  F = x^2*y
    SchweizerSklar   T = (x^b + y^b - 1)^(1/b), b<0           F = same with y -> x*y
      (b < 0)          on (0,1]^2, 0 otherwise
    CShelf           T = 0 on (0,1)^2 outside [c,1)^2,        F = 0 where (x, x*y) is in
                         min(x, y) otherwise                      that zero region, x*y otherwise
    Drastic          T = min(x, y) if max(x, y) = 1, else 0   F = 0 for x<1, y at x=1

Lukasiewicz (max(x + y - 1, 0)) is the b = 1 member of the positive
Schweizer-Sklar branch and is kept as its own kind because no fractional
powers occur in it.  Ordinal sums and DSL expressions round out TNormSpec
for use as verification and counterexample targets.

All evaluation is pure; values are binary64 and results of power-based
formulas are clamped to [0, 1] with at most CLAMP_SLACK of drift allowed.
The zero branch of the Schweizer-Sklar formulas is decided before any
power is taken, so 0^b with b < 0 is never evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import dsl
from .dsl import Expression, eval_expr

__all__ = [
    "DomainError",
    "StructuralError",
    "Minimum",
    "Product",
    "Lukasiewicz",
    "Drastic",
    "SchweizerSklar",
    "CShelf",
    "Summand",
    "OrdinalSum",
    "Expr",
    "TNormSpec",
    "Catalog",
    "Canonical",
    "CompanionF",
    "CATALOG_KINDS",
    "MIN_ABS_BETA",
    "CLAMP_SLACK",
    "as_unit",
    "eval_tnorm",
    "eval_companion",
    "tnorm_values",
    "companion_values",
    "Diagonal",
    "diagonal",
    "diagonal_values",
    "t_power",
    "diagonal_pseudo_inverse",
    "spec_label",
    "companion_label",
]

#: rejection threshold for Schweizer-Sklar exponents; the b -> 0 limit is
#: the Product kind, listed separately in the catalog.
MIN_ABS_BETA = 1e-3

#: tolerated distance of a power-formula result outside [0, 1] before the
#: clamp is treated as an evaluation error.
CLAMP_SLACK = 1e-9


class DomainError(Exception):
    """A value left [0, 1] (or was NaN) where a unit value is required."""


class StructuralError(Exception):
    """An operation was applied to a t-norm outside its precondition."""


def as_unit(value: float, label: str = "value") -> float:
    """Validate ``value`` as a float in [0, 1]; NaN and out-of-range reject."""
    v = float(value)
    if math.isnan(v) or v < 0.0 or v > 1.0:
        raise DomainError(f"{label} must lie in [0, 1], got {value!r}")
    return v


# --------------------------------------------------------------------------
# T-norm descriptions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Minimum:
    pass


@dataclass(frozen=True)
class Product:
    pass


@dataclass(frozen=True)
class Lukasiewicz:
    pass


@dataclass(frozen=True)
class Drastic:
    pass


@dataclass(frozen=True)
class SchweizerSklar:
    beta: float

    def __post_init__(self):
        b = float(self.beta)
        if math.isnan(b) or math.isinf(b) or abs(b) < MIN_ABS_BETA:
            raise ValueError(
                f"beta must be finite with |beta| >= {MIN_ABS_BETA}; got {self.beta!r}"
                " (use Product for the beta -> 0 limit)")
        object.__setattr__(self, "beta", b)


@dataclass(frozen=True)
class CShelf:
    c: float

    def __post_init__(self):
        c = float(self.c)
        if not (0.0 < c < 1.0):
            raise ValueError(f"shelf edge c must lie strictly inside (0, 1); got {self.c!r}")
        object.__setattr__(self, "c", c)


@dataclass(frozen=True)
class Summand:
    lower: float
    upper: float
    inner: "TNormSpec"

    def __post_init__(self):
        lo = as_unit(self.lower, "summand lower bound")
        hi = as_unit(self.upper, "summand upper bound")
        if not lo < hi:
            raise ValueError(f"summand needs lower < upper; got [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


@dataclass(frozen=True)
class OrdinalSum:
    summands: tuple[Summand, ...]

    def __init__(self, summands):
        items = []
        for s in summands:
            items.append(s if isinstance(s, Summand) else Summand(*s))
        items.sort(key=lambda s: s.lower)
        if not items:
            raise ValueError("ordinal sum needs at least one summand")
        for a, b in zip(items, items[1:]):
            if a.upper > b.lower:
                raise ValueError(
                    f"summand intervals overlap: [{a.lower}, {a.upper}] and"
                    f" [{b.lower}, {b.upper}]")
        object.__setattr__(self, "summands", tuple(items))


@dataclass(frozen=True)
class Expr:
    """A binary function given as a DSL expression in x and y.

    Doubles as a t-norm description and as a companion description; every
    evaluation checks that the result stays inside [0, 1].
    """

    ast: Expression

    def __post_init__(self):
        if isinstance(self.ast, str):
            object.__setattr__(self, "ast", dsl.parse(self.ast))


TNormSpec = Union[Minimum, Product, Lukasiewicz, Drastic, SchweizerSklar,
                  CShelf, OrdinalSum, Expr]

#: kinds covered by the closed catalog (everything except ordinal sums and
#: expressions, which have no catalog companion).
CATALOG_KINDS = (Minimum, Product, Lukasiewicz, Drastic, SchweizerSklar, CShelf)


# --------------------------------------------------------------------------
# Companion descriptions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Catalog:
    """The companion paired with a catalog kind in the table above."""

    of: TNormSpec

    def __post_init__(self):
        if not isinstance(self.of, CATALOG_KINDS):
            raise ValueError(
                f"no catalog companion for {type(self.of).__name__}; only the six"
                " closed-form kinds have one")


@dataclass(frozen=True)
class Canonical:
    """The companion derived from any t-norm via F(x, y) = T(x, x*y)."""

    of: TNormSpec


CompanionF = Union[Catalog, Canonical, Expr]


# --------------------------------------------------------------------------
# Array evaluation
# --------------------------------------------------------------------------

def _broadcast(x, y) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    shape = np.broadcast(xa, ya).shape
    return np.broadcast_to(xa, shape), np.broadcast_to(ya, shape)


def _clamp_unit(values: np.ndarray, context: str) -> np.ndarray:
    """Clamp last-ulp drift into [0, 1]; drift beyond CLAMP_SLACK is an error."""
    if values.size == 0:
        return values
    lo = float(np.min(values))
    hi = float(np.max(values))
    if math.isnan(lo) or lo < -CLAMP_SLACK or hi > 1.0 + CLAMP_SLACK:
        raise DomainError(f"{context} produced a value outside [0, 1]: "
                          f"range [{lo}, {hi}]")
    if lo < 0.0 or hi > 1.0:
        return np.clip(values, 0.0, 1.0)
    return values


def _ss_values(beta: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Schweizer-Sklar family on (0,1]^2, zero branch first, exact at the
    neutral element."""
    xb, yb = _broadcast(x, y)
    out = np.zeros(xb.shape)
    inside = (xb > 0.0) & (yb > 0.0)
    xi = xb[inside]
    yi = yb[inside]
    inv = 1.0 / beta
    if beta > 0.0:
        s = np.power(xi, beta) + np.power(yi, beta) - 1.0
        ti = np.power(np.maximum(s, 0.0), inv)
    else:
        with np.errstate(over="ignore"):
            s = np.power(xi, beta) + np.power(yi, beta) - 1.0
            ti = np.power(s, inv)
        overflow = ~np.isfinite(s)
        if np.any(overflow):
            # x^b overflowed; rescale by the smaller argument, whose power
            # factors out: T = m * (1 + (m/M)^|b| - m^|b|)^(1/b).
            m = np.minimum(xi[overflow], yi[overflow])
            big = np.maximum(xi[overflow], yi[overflow])
            bracket = 1.0 + np.power(m / big, -beta) - np.power(m, -beta)
            ti[overflow] = m * np.power(bracket, inv)
    out[inside] = ti
    out = np.where(yb == 1.0, xb, out)
    out = np.where(xb == 1.0, yb, out)
    return _clamp_unit(out, f"SchweizerSklar(beta={beta})")


def _cshelf_values(c: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    xb, yb = _broadcast(x, y)
    zero = ((xb > 0.0) & (xb < 1.0) & (yb > 0.0) & (yb < 1.0)
            & ~((xb >= c) & (yb >= c)))
    return np.where(zero, 0.0, np.minimum(xb, yb))


def _expr_values(ast: Expression, x: np.ndarray, y: np.ndarray,
                 context: str) -> np.ndarray:
    xb, yb = _broadcast(x, y)
    values = np.asarray(eval_expr(ast, xb, yb), dtype=np.float64)
    bad = np.isnan(values) | (values < -CLAMP_SLACK) | (values > 1.0 + CLAMP_SLACK)
    if np.any(bad):
        idx = int(np.argmax(np.ravel(bad)))
        px = float(np.ravel(xb)[idx])
        py = float(np.ravel(yb)[idx])
        pv = float(np.ravel(values)[idx])
        raise DomainError(f"{context} evaluates outside [0, 1] at "
                          f"(x, y) = ({px}, {py}): {pv}")
    return np.clip(values, 0.0, 1.0)


def tnorm_values(spec: TNormSpec, x, y) -> np.ndarray:
    """Vectorized t-norm evaluation on broadcastable float arrays."""
    xb, yb = _broadcast(x, y)
    if isinstance(spec, Minimum):
        return np.minimum(xb, yb)
    if isinstance(spec, Product):
        return xb * yb
    if isinstance(spec, Lukasiewicz):
        return np.maximum(xb + yb - 1.0, 0.0)
    if isinstance(spec, Drastic):
        return np.where((xb == 1.0) | (yb == 1.0), np.minimum(xb, yb), 0.0)
    if isinstance(spec, SchweizerSklar):
        return _ss_values(spec.beta, xb, yb)
    if isinstance(spec, CShelf):
        return _cshelf_values(spec.c, xb, yb)
    if isinstance(spec, OrdinalSum):
        out = np.minimum(xb, yb)
        for s in spec.summands:
            span = s.upper - s.lower
            mask = ((xb >= s.lower) & (xb <= s.upper)
                    & (yb >= s.lower) & (yb <= s.upper))
            if np.any(mask):
                xi = (xb[mask] - s.lower) / span
                yi = (yb[mask] - s.lower) / span
                out[mask] = s.lower + span * tnorm_values(s.inner, xi, yi)
        return out
    if isinstance(spec, Expr):
        return _expr_values(spec.ast, xb, yb, "t-norm expression")
    raise TypeError(f"not a t-norm description: {spec!r}")


def companion_values(f: CompanionF, x, y) -> np.ndarray:
    """Vectorized companion evaluation on broadcastable float arrays."""
    xb, yb = _broadcast(x, y)
    if isinstance(f, Expr):
        return _expr_values(f.ast, xb, yb, "companion expression")
    if isinstance(f, Canonical):
        return tnorm_values(f.of, xb, xb * yb)
    if isinstance(f, Catalog):
        spec = f.of
        w = xb * yb
        if isinstance(spec, Minimum):
            return w
        if isinstance(spec, Product):
            # x^2*y evaluated as x*(x*y): keeps the catalog companion
            # bit-equal to the canonical derivation T(x, x*y).
            return xb * w
        if isinstance(spec, Lukasiewicz):
            return np.maximum(xb + w - 1.0, 0.0)
        if isinstance(spec, SchweizerSklar):
            return _ss_values(spec.beta, xb, w)
        if isinstance(spec, CShelf):
            c = spec.c
            zero = ((xb > 0.0) & (xb < 1.0) & (w > 0.0) & (w < 1.0)
                    & ~((xb >= c) & (w >= c)))
            return np.where(zero, 0.0, w)
        if isinstance(spec, Drastic):
            return np.where(xb == 1.0, yb, 0.0)
        raise TypeError(f"no catalog companion for {spec!r}")
    raise TypeError(f"not a companion description: {f!r}")


# --------------------------------------------------------------------------
# Scalar operations
# --------------------------------------------------------------------------

def eval_tnorm(spec: TNormSpec, x: float, y: float) -> float:
    """T(x, y) for unit values x, y."""
    xv = as_unit(x, "x")
    yv = as_unit(y, "y")
    return float(tnorm_values(spec, np.asarray([xv]), np.asarray([yv]))[0])


def eval_companion(f: CompanionF, x: float, y: float) -> float:
    """F(x, y) for unit values x, y."""
    xv = as_unit(x, "x")
    yv = as_unit(y, "y")
    return float(companion_values(f, np.asarray([xv]), np.asarray([yv]))[0])


def diagonal(spec: TNormSpec, x: float) -> float:
    """The diagonal x -> T(x, x)."""
    return eval_tnorm(spec, x, x)


def diagonal_values(spec: TNormSpec, x) -> np.ndarray:
    xa = np.asarray(x, dtype=np.float64)
    return tnorm_values(spec, xa, xa)


@dataclass(frozen=True)
class Diagonal:
    """x -> T(x, x) as a callable value.

    For any t-norm it fixes 0 and 1, never exceeds its argument, and is
    monotone increasing; the scans in the analysis layer verify those
    properties rather than assume them.
    """

    of: TNormSpec

    def __call__(self, x: float) -> float:
        return diagonal(self.of, x)

    def values(self, x) -> np.ndarray:
        return diagonal_values(self.of, x)


def t_power(spec: TNormSpec, x: float, n: int) -> float:
    """n-fold composition x^(n): x^(1) = x, x^(n) = T(x, x^(n-1))."""
    if n < 1:
        raise ValueError(f"power index must be >= 1, got {n}")
    xv = as_unit(x, "x")
    p = xv
    for _ in range(n - 1):
        p = eval_tnorm(spec, xv, p)
    return p


_PSEUDO_INVERSE_SAMPLES = 129


def diagonal_pseudo_inverse(spec: TNormSpec, y: float, tol: float) -> float:
    """sup{z : T(z, z) <= y}, located by bisection to absolute accuracy tol.

    Meaningful for t-norms with a continuous increasing diagonal (the
    strict and nilpotent catalog kinds); a non-monotone sampled diagonal
    raises StructuralError.
    """
    yv = as_unit(y, "y")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    zs = np.linspace(0.0, 1.0, _PSEUDO_INVERSE_SAMPLES)
    ds = diagonal_values(spec, zs)
    if np.any(np.diff(ds) < -1e-12):
        raise StructuralError(
            "sampled diagonal is not monotone increasing; the pseudo-inverse"
            " is defined only for monotone diagonals")
    if float(ds[-1]) <= yv:
        return 1.0
    lo, hi = 0.0, 1.0  # invariant: d(lo) <= y < d(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if diagonal(spec, mid) <= yv:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------
# Labels (shared by reports and the CLI mini-syntax)
# --------------------------------------------------------------------------

def _format_param(v: float) -> str:
    return format(v, ".12g")


def spec_label(spec: TNormSpec) -> str:
    if isinstance(spec, Minimum):
        return "min"
    if isinstance(spec, Product):
        return "prod"
    if isinstance(spec, Lukasiewicz):
        return "luk"
    if isinstance(spec, Drastic):
        return "drastic"
    if isinstance(spec, SchweizerSklar):
        return f"ss:{_format_param(spec.beta)}"
    if isinstance(spec, CShelf):
        return f"cshelf:{_format_param(spec.c)}"
    if isinstance(spec, OrdinalSum):
        parts = ";".join(
            f"{_format_param(s.lower)},{_format_param(s.upper)},{spec_label(s.inner)}"
            for s in spec.summands)
        return f"osum:[{parts}]"
    if isinstance(spec, Expr):
        return f"expr:{dsl.serialize(spec.ast)}"
    raise TypeError(f"not a t-norm description: {spec!r}")


def companion_label(f: CompanionF) -> str:
    if isinstance(f, Catalog):
        return f"catalog({spec_label(f.of)})"
    if isinstance(f, Canonical):
        return f"canonical({spec_label(f.of)})"
    if isinstance(f, Expr):
        return f"expr:{dsl.serialize(f.ast)}"
    raise TypeError(f"not a companion description: {f!r}")
