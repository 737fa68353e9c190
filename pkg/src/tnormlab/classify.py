"""Black-box family identification.

Given any t-norm description that passes the axiom suite, decide which
catalog family it is (estimating the exponent or the shelf edge where the
family is parametric) or certify NotGPH with a scaling-equation witness.

Decision procedure, in order: identity diagonal (Minimum); zero diagonal
on the interior (Drastic); zero plateau followed by identity (CShelf, edge
refined by bisection); pointwise product match (Product); exponent fit
(Schweizer-Sklar, sign of the fitted exponent picks the branch).  A branch
only nominates a candidate: the verdict always comes from the residual
against the exact family member on a validation lattice offset from the
decision grid, so a parametric family is never returned with validation
residual above eq_tol.

The exponent fit solves, per sample (x, y, t = T(x, y)), the scalar root
problem x^b + y^b - 1 - t^b = 0 by sign bracketing over
[-60, -1e-3] u [1e-3, 60] and bisection (b = 0 is always a root and is
excluded; beyond |b| = 60 the family is numerically indistinguishable from
min on binary64 grids).  The estimate is the median of per-sample roots,
which ignores the few samples that land near the max{., 0} fold.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import GridSpec, check_axioms, find_gph_counterexample
from .core import (
    CShelf,
    Drastic,
    Minimum,
    Product,
    SchweizerSklar,
    TNormSpec,
    diagonal,
    diagonal_values,
    spec_label,
    tnorm_values,
)
from .rng import SplitMix64

__all__ = [
    "PreconditionError",
    "FitError",
    "ClassificationResult",
    "BETA_BRACKET",
    "classify",
    "fit_beta",
    "fit_beta_from_triples",
]

#: search range for the Schweizer-Sklar exponent.
BETA_BRACKET = (1e-3, 60.0)

#: samples whose t differs from x*y by less than this are uninformative for
#: the exponent fit (they belong to the Product branch).
PRODUCT_GUARD = 1e-6

_MIN_SAMPLES = 50
_TARGET_SAMPLES = 64
_MAX_DRAWS = 20_000
_BISECT_TOL = 1e-10
_LADDER_POINTS = 48


class PreconditionError(Exception):
    """The input is not a t-norm at grid scale; classification is undefined."""


class FitError(Exception):
    """The exponent fit could not bracket roots for enough samples."""


@dataclass(frozen=True)
class ClassificationResult:
    family: str  # Minimum | SchweizerSklarPos | Product | SchweizerSklarNeg
    #             | CShelf | Drastic | NotGPH
    parameter: Optional[float]
    residual: float
    evidence: tuple

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "parameter": self.parameter,
            "residual": self.residual,
            "evidence": list(self.evidence),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


# --------------------------------------------------------------------------
# Exponent fit
# --------------------------------------------------------------------------

def _h(beta: float, x: float, y: float, t: float) -> float:
    """x^b + y^b - 1 - t^b, rescaled by t^b on the negative side so that no
    term can overflow (t <= min(x, y) keeps every ratio power in (0, 1])."""
    if beta > 0.0:
        return x**beta + y**beta - 1.0 - t**beta
    return (x / t) ** beta + (y / t) ** beta - t ** (-beta) - 1.0


def _bisect_root(x: float, y: float, t: float, lo: float, hi: float,
                 f_lo: float, f_hi: float) -> float:
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        f_mid = _h(mid, x, y, t)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0.0) != (f_mid < 0.0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def _sample_roots(x: float, y: float, t: float) -> list[float]:
    """All bracketed roots of the per-sample equation, both signs."""
    lo, hi = BETA_BRACKET
    ladder = np.geomspace(lo, hi, _LADDER_POINTS)
    roots = []
    for side in (1.0, -1.0):
        betas = side * ladder
        values = [_h(float(b), x, y, t) for b in betas]
        for i in range(len(betas) - 1):
            a, b = float(betas[i]), float(betas[i + 1])
            fa, fb = values[i], values[i + 1]
            if fa == 0.0 or (fa < 0.0) != (fb < 0.0):
                if a > b:
                    a, b, fa, fb = b, a, fb, fa
                roots.append(_bisect_root(x, y, t, a, b, fa, fb))
        if values[-1] == 0.0:
            roots.append(float(betas[-1]))
    return roots


def fit_beta_from_triples(triples: np.ndarray,
                          max_missing_fraction: float = 0.2) -> float:
    """Median per-sample root over (x, y, t) rows.

    Raises :class:`FitError` when more than ``max_missing_fraction`` of the
    samples bracket no root at all.
    """
    triples = np.asarray(triples, dtype=np.float64)
    per_sample = []
    missing = 0
    for x, y, t in triples:
        roots = _sample_roots(float(x), float(y), float(t))
        if not roots:
            missing += 1
            continue
        # the root at which the equation is satisfied best
        per_sample.append(min(roots, key=lambda b: abs(_h(b, float(x), float(y),
                                                          float(t)))))
    if missing > max_missing_fraction * len(triples) or not per_sample:
        raise FitError(
            f"no exponent bracket for {missing} of {len(triples)} samples")
    return float(np.median(per_sample))


def _draw_fit_samples(spec: TNormSpec, grid: GridSpec) -> np.ndarray:
    """Seeded (x, y, t) rows with t interior and off the product surface."""
    rng = SplitMix64(grid.seed)
    rows = []
    drawn = 0
    while len(rows) < _TARGET_SAMPLES and drawn < _MAX_DRAWS:
        batch = rng.unit_tuples(256, 2)
        drawn += 256
        x = batch[:, 0]
        y = batch[:, 1]
        t = tnorm_values(spec, x, y)
        keep = ((t > 0.0) & (t < 1.0) & (x > 0.0) & (x < 1.0)
                & (y > 0.0) & (y < 1.0) & (np.abs(t - x * y) > PRODUCT_GUARD))
        for i in np.nonzero(keep)[0]:
            rows.append((float(x[i]), float(y[i]), float(t[i])))
            if len(rows) >= _TARGET_SAMPLES:
                break
    if len(rows) < _MIN_SAMPLES:
        raise FitError(
            f"only {len(rows)} informative samples in {drawn} draws; need"
            f" {_MIN_SAMPLES}")
    return np.asarray(rows)


def _validation_residual(spec: TNormSpec, candidate: TNormSpec,
                         grid: GridSpec) -> float:
    axis = grid.validation_axis()
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    return float(np.abs(tnorm_values(spec, X, Y)
                        - tnorm_values(candidate, X, Y)).max())


def fit_beta(spec: TNormSpec, grid: GridSpec = GridSpec()) -> tuple[float, float]:
    """Fitted exponent and its validation residual against the exact
    Schweizer-Sklar member on the off-grid lattice."""
    samples = _draw_fit_samples(spec, grid)
    beta_hat = fit_beta_from_triples(samples)
    residual = _validation_residual(spec, SchweizerSklar(beta_hat), grid)
    return beta_hat, residual


# --------------------------------------------------------------------------
# Classification
# --------------------------------------------------------------------------

def _refine_shelf_edge(spec: TNormSpec, lo: float, hi: float,
                       eq_tol: float, step_h: float) -> float:
    """Bisect the diagonal's jump point: zero at lo, identity at hi."""
    while hi - lo > step_h:
        mid = 0.5 * (lo + hi)
        if diagonal(spec, mid) <= eq_tol:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def classify(spec: TNormSpec, grid: GridSpec = GridSpec(),
             assoc_full: bool = False) -> ClassificationResult:
    """Identify the family of ``spec`` (see module docstring).

    Raises :class:`PreconditionError` when the axiom suite fails.
    """
    evidence: list[dict] = []

    axioms = check_axioms(spec, grid, assoc_full=assoc_full)
    evidence.append({"test": "axioms", "passed": axioms.passed,
                     "detail": {"max_residual": axioms.max_residual,
                                "failed_axiom": axioms.metadata["failed_axiom"]}})
    if not axioms.passed:
        raise PreconditionError(
            f"axiom suite failed ({axioms.metadata['failed_axiom']}): "
            f"{axioms.summary()}")

    g = grid.axis()
    d = diagonal_values(spec, g)

    def validated(family: str, candidate: TNormSpec,
                  parameter: Optional[float]) -> Optional[ClassificationResult]:
        residual = _validation_residual(spec, candidate, grid)
        ok = residual <= grid.eq_tol
        evidence.append({"test": f"validate_{family}", "passed": ok,
                         "detail": {"candidate": spec_label(candidate),
                                    "residual": residual}})
        if ok:
            name = {"minimum": "Minimum", "product": "Product",
                    "drastic": "Drastic", "cshelf": "CShelf",
                    "schweizer_sklar_pos": "SchweizerSklarPos",
                    "schweizer_sklar_neg": "SchweizerSklarNeg"}[family]
            return ClassificationResult(name, parameter, residual,
                                        tuple(evidence))
        return None

    # (1) identity diagonal -> Minimum
    idempotent = bool(np.abs(d - g).max() <= grid.strict_tol)
    evidence.append({"test": "idempotent_diagonal", "passed": idempotent,
                     "detail": {"max_deviation": float(np.abs(d - g).max())}})
    if idempotent:
        result = validated("minimum", Minimum(), None)
        if result:
            return result

    # (2) diagonal structure: all-zero interior -> Drastic,
    #     zero plateau then identity -> CShelf
    interior = (g > 0.0) & (g < 1.0)
    gi, di = g[interior], d[interior]
    zero_interior = bool(np.all(di <= grid.eq_tol))
    evidence.append({"test": "zero_diagonal", "passed": zero_interior,
                     "detail": {}})
    if zero_interior:
        result = validated("drastic", Drastic(), None)
        if result:
            return result

    shelf_edge = None
    if not zero_interior and di[0] <= grid.eq_tol:
        k = int(np.argmin(di <= grid.eq_tol))
        if np.all(di[k:] >= gi[k:] - grid.eq_tol):
            c_hat = _refine_shelf_edge(spec, float(gi[k - 1]), float(gi[k]),
                                       grid.eq_tol, grid.step_h)
            shelf_edge = c_hat
    evidence.append({"test": "shelf_pattern", "passed": shelf_edge is not None,
                     "detail": {"shelf_edge": shelf_edge}})
    if shelf_edge is not None:
        result = validated("cshelf", CShelf(shelf_edge), shelf_edge)
        if result:
            return result

    # (3) pointwise product
    X, Y = np.meshgrid(g, g, indexing="ij")
    prod_dev = float(np.abs(tnorm_values(spec, X, Y) - X * Y).max())
    product_match = prod_dev <= grid.eq_tol
    evidence.append({"test": "product_match", "passed": product_match,
                     "detail": {"max_deviation": prod_dev}})
    if product_match:
        result = validated("product", Product(), None)
        if result:
            return result

    # (4) exponent fit
    beta_hat = None
    try:
        samples = _draw_fit_samples(spec, grid)
        beta_hat = fit_beta_from_triples(samples)
        evidence.append({"test": "beta_fit", "passed": True,
                         "detail": {"beta_hat": beta_hat,
                                    "samples": int(len(samples))}})
    except FitError as err:
        evidence.append({"test": "beta_fit", "passed": False,
                         "detail": {"error": str(err)}})
    if beta_hat is not None:
        family = ("schweizer_sklar_pos" if beta_hat > 0
                  else "schweizer_sklar_neg")
        result = validated(family, SchweizerSklar(beta_hat), beta_hat)
        if result:
            return result

    # NotGPH: record how far the closed kinds are and certify with a witness
    for family, candidate in (("minimum", Minimum()), ("product", Product()),
                              ("drastic", Drastic())):
        if not any(e["test"] == f"validate_{family}" for e in evidence):
            result = validated(family, candidate, None)
            if result:  # a branch predicate was too strict; the residual rules
                return result

    counterexample = find_gph_counterexample(spec, grid)
    evidence.append({
        "test": "gph_counterexample",
        "passed": counterexample.passed,
        "detail": {"witness": (counterexample.witness.to_dict()
                               if counterexample.witness else None),
                   "max_residual": counterexample.max_residual},
    })

    best = min((e["detail"]["residual"] for e in evidence
                if e["test"].startswith("validate_")), default=math.inf)
    return ClassificationResult("NotGPH", None, float(best), tuple(evidence))
