"""Numerical verification engine.

Every check sweeps exact evaluations over a deterministic grid (plus a
seeded random sample where noted) and reduces to a :class:`Report`:
pass/fail, the largest residual seen, and a :class:`Witness` pinpointing a
violation when there is one.  Reports are pure functions of their inputs
and the :class:`GridSpec`, so identical seeds reproduce identical reports
byte for byte.

Witness slots are named after the scaling equation T(l*x, l*y) =
F(l, T(x, y)); checks that probe pairs rather than triples set ``lam`` to
1 and document the slot meaning in the report metadata.

Continuity cannot be decided from finitely many samples.  The two checks
that talk about it use a grid-jump surrogate (adjacent values differing by
more than ``CONTINUITY_JUMP_FACTOR`` times the grid spacing) and mark
their reports as heuristic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    Canonical,
    CompanionF,
    OrdinalSum,
    TNormSpec,
    companion_label,
    companion_values,
    diagonal,
    diagonal_values,
    eval_tnorm,
    spec_label,
    tnorm_values,
)
from .rng import SplitMix64

__all__ = [
    "GridSpec",
    "Witness",
    "Report",
    "CONTINUITY_JUMP_FACTOR",
    "ASSOC_GRID_CAP",
    "check_axioms",
    "canonical_f",
    "reconstruct_t_from_f",
    "reconstruct_values",
    "check_gph",
    "check_unit_scale",
    "check_pseudo_homogeneous",
    "check_archimedean",
    "scan_diagonal",
    "check_tm_equivalences",
    "check_continuity_equivalence",
    "find_gph_counterexample",
    "residual_rows",
]

#: adjacent-cell jump beyond CONTINUITY_JUMP_FACTOR * spacing counts as a
#: discontinuity at grid scale.  A desk-scale surrogate, not a proof: steep
#: continuous functions (Schweizer-Sklar with large exponents near the
#: nilpotent boundary) can exceed it.
CONTINUITY_JUMP_FACTOR = 10.0

#: associativity sweeps use the full points^3 cube only up to this many
#: axis points; finer grids fall back to this cap plus random triples.
ASSOC_GRID_CAP = 41


@dataclass(frozen=True)
class GridSpec:
    """Resolution, tolerances, and sampling controls for every sweep."""

    points: int = 101
    eq_tol: float = 1e-9
    strict_tol: float = 1e-12
    samples: int = 10_000
    seed: int = 0xC0FFEE
    step_h: float = 1e-6

    def __post_init__(self):
        if self.points < 3:
            raise ValueError(f"points must be >= 3, got {self.points}")
        if not (self.eq_tol > 0 and self.strict_tol > 0):
            raise ValueError("tolerances must be positive")
        if not (0 < self.step_h <= 1e-2):
            raise ValueError(f"step_h must lie in (0, 1e-2], got {self.step_h}")
        if self.samples < 0:
            raise ValueError("samples must be >= 0")

    def axis(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.points)

    @property
    def spacing(self) -> float:
        return 1.0 / (self.points - 1)

    def validation_axis(self) -> np.ndarray:
        """Off-grid lattice, offset from :meth:`axis` by half a spacing."""
        h = self.spacing
        return np.linspace(0.5 * h, 1.0 - 0.5 * h, self.points - 1)


@dataclass(frozen=True)
class Witness:
    """A concrete violation: the probed triple and both sides of the check."""

    lam: float
    x: float
    y: float
    lhs: float
    rhs: float
    gap: float

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "x": self.x,
            "y": self.y,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
        }


@dataclass(frozen=True)
class Report:
    check: str
    passed: bool
    max_residual: float
    witness: Optional[Witness]
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "witness": self.witness.to_dict() if self.witness else None,
            "metadata": self.metadata,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def summary(self) -> str:
        line = (f"{self.check}: {'PASS' if self.passed else 'FAIL'} "
                f"max_residual={self.max_residual:.3e}")
        if self.witness is not None:
            w = self.witness
            line += (f" witness(lambda={w.lam:.12g} x={w.x:.12g} y={w.y:.12g}"
                     f" lhs={w.lhs:.12g} rhs={w.rhs:.12g} gap={w.gap:.12g})")
        return line


def _witness_from(lam, x, y, lhs, rhs) -> Witness:
    lhs = float(lhs)
    rhs = float(rhs)
    return Witness(float(lam), float(x), float(y), lhs, rhs, abs(lhs - rhs))


def canonical_f(spec: TNormSpec) -> Canonical:
    """The companion every t-norm determines: F(x, y) = T(x, x*y)."""
    return Canonical(spec)


def reconstruct_values(f: CompanionF, x, y) -> np.ndarray:
    """T recovered from its companion: T(x, y) = F(max, min/max); (0,0) -> 0."""
    xb = np.asarray(x, dtype=np.float64)
    yb = np.asarray(y, dtype=np.float64)
    u = np.maximum(xb, yb)
    v = np.minimum(xb, yb)
    ratio = v / np.where(u > 0.0, u, 1.0)
    vals = companion_values(f, u, ratio)
    return np.where(u > 0.0, vals, 0.0)


def reconstruct_t_from_f(f: CompanionF, x: float, y: float) -> float:
    return float(reconstruct_values(f, np.asarray([float(x)]),
                                    np.asarray([float(y)]))[0])


# --------------------------------------------------------------------------
# Axiom suite
# --------------------------------------------------------------------------

def check_axioms(spec: TNormSpec, grid: GridSpec = GridSpec(),
                 assoc_full: bool = False) -> Report:
    """Boundary, commutativity, monotonicity, and associativity at strict_tol.

    Stages run in the order T4, T1, T3, T2 and the first violating point
    becomes the witness.  Associativity uses the full triple cube only up
    to ASSOC_GRID_CAP axis points (or with ``assoc_full``); beyond that a
    capped cube plus seeded random triples.
    """
    g = grid.axis()
    tol = grid.strict_tol
    X, Y = np.meshgrid(g, g, indexing="ij")
    T_xy = tnorm_values(spec, X, Y)

    residuals: dict[str, float] = {}
    witness = None
    failed_axiom = None

    def note(axiom: str, res: float, w: Optional[Witness]):
        nonlocal witness, failed_axiom
        residuals[axiom] = res
        if w is not None and witness is None:
            witness = w
            failed_axiom = axiom

    # T4: T(x, 1) = x
    col = tnorm_values(spec, g, np.ones_like(g))
    r4 = np.abs(col - g)
    w = None
    if np.any(r4 > tol):
        i = int(np.argmax(r4 > tol))
        w = _witness_from(1.0, g[i], 1.0, col[i], g[i])
    note("T4", float(r4.max()), w)

    # T1: T(x, y) = T(y, x)
    r1 = np.abs(T_xy - T_xy.T)
    w = None
    if np.any(r1 > tol):
        i, j = np.unravel_index(int(np.argmax(np.ravel(r1 > tol))), r1.shape)
        w = _witness_from(1.0, g[i], g[j], T_xy[i, j], T_xy[j, i])
    note("T1", float(r1.max()), w)

    # T3: y <= z implies T(x, y) <= T(x, z); adjacent columns suffice
    drops = T_xy[:, :-1] - T_xy[:, 1:]
    r3 = np.maximum(drops, 0.0)
    w = None
    if np.any(r3 > tol):
        i, j = np.unravel_index(int(np.argmax(np.ravel(r3 > tol))), r3.shape)
        w = Witness(float(g[i]), float(g[j]), float(g[j + 1]),
                    float(T_xy[i, j + 1]), float(T_xy[i, j]),
                    float(T_xy[i, j] - T_xy[i, j + 1]))
    note("T3", float(r3.max()), w)

    # T2: T(x, T(y, z)) = T(T(x, y), z)
    if assoc_full or grid.points <= ASSOC_GRID_CAP:
        axis = g
    else:
        axis = np.linspace(0.0, 1.0, ASSOC_GRID_CAP)
    n = axis.size
    T_ab = tnorm_values(spec, axis[:, None], axis[None, :])
    lhs = tnorm_values(spec, axis[:, None, None], T_ab[None, :, :])
    rhs = tnorm_values(spec, T_ab[:, :, None], axis[None, None, :])
    r2 = np.abs(lhs - rhs)
    w = None
    if np.any(r2 > tol):
        i, j, k = np.unravel_index(int(np.argmax(np.ravel(r2 > tol))), r2.shape)
        w = Witness(float(axis[i]), float(axis[j]), float(axis[k]),
                    float(lhs[i, j, k]), float(rhs[i, j, k]),
                    float(r2[i, j, k]))
    r2_max = float(r2.max())

    # random triples extend the capped cube
    samples_used = 0
    if axis.size < grid.points and grid.samples > 0:
        rng = SplitMix64(grid.seed)
        trip = rng.unit_tuples(grid.samples, 3)
        a, b, c = trip[:, 0], trip[:, 1], trip[:, 2]
        lhs_r = tnorm_values(spec, a, tnorm_values(spec, b, c))
        rhs_r = tnorm_values(spec, tnorm_values(spec, a, b), c)
        rr = np.abs(lhs_r - rhs_r)
        samples_used = grid.samples
        if w is None and np.any(rr > tol):
            i = int(np.argmax(rr > tol))
            w = _witness_from(a[i], b[i], c[i], lhs_r[i], rhs_r[i])
        r2_max = max(r2_max, float(rr.max()))
    note("T2", r2_max, w)

    max_residual = max(residuals.values())
    passed = max_residual <= tol
    metadata = {
        "tnorm": spec_label(spec),
        "points": grid.points,
        "assoc_points": int(n),
        "assoc_samples": samples_used,
        "seed": grid.seed,
        "strict_tol": tol,
        "axiom_residuals": residuals,
        "failed_axiom": failed_axiom,
        "witness_slots": "T2 uses (lam, x, y) = probed triple; T3 uses"
                         " (x; y, z) with y <= z; pair checks set lam = 1",
    }
    return Report("axioms", passed, max_residual, witness if not passed else None,
                  metadata)


# --------------------------------------------------------------------------
# Scaling-equation sweeps
# --------------------------------------------------------------------------

def check_gph(spec: TNormSpec, f: Optional[CompanionF] = None,
              grid: GridSpec = GridSpec()) -> Report:
    """Residual sweep of T(l*x, l*y) = F(l, T(x, y)).

    With ``f`` omitted the check is intrinsic: it uses the canonical
    companion F(l, t) = T(l, l*t), the only candidate any t-norm admits.
    Sweeps all grid triples in (l, x, y) scan order plus ``samples`` seeded
    random triples; the witness is the first maximal-gap triple.
    """
    comp = canonical_f(spec) if f is None else f
    g = grid.axis()
    X, Y = np.meshgrid(g, g, indexing="ij")
    T_xy = tnorm_values(spec, X, Y)

    best_gap = -1.0
    best = None
    for lam in g:
        lhs = tnorm_values(spec, lam * X, lam * Y)
        rhs = companion_values(comp, lam, T_xy)
        res = np.abs(lhs - rhs)
        m = float(res.max())
        if m > best_gap:
            idx = int(np.argmax(np.ravel(res)))
            i, j = np.unravel_index(idx, res.shape)
            best = _witness_from(lam, X[i, j], Y[i, j], lhs[i, j], rhs[i, j])
            best_gap = m

    if grid.samples > 0:
        rng = SplitMix64(grid.seed)
        trip = rng.unit_tuples(grid.samples, 3)
        lam_r, x_r, y_r = trip[:, 0], trip[:, 1], trip[:, 2]
        lhs = tnorm_values(spec, lam_r * x_r, lam_r * y_r)
        rhs = companion_values(comp, lam_r, tnorm_values(spec, x_r, y_r))
        res = np.abs(lhs - rhs)
        m = float(res.max())
        if m > best_gap:
            i = int(np.argmax(res))
            best = _witness_from(lam_r[i], x_r[i], y_r[i], lhs[i], rhs[i])
            best_gap = m

    passed = best_gap <= grid.eq_tol
    metadata = {
        "tnorm": spec_label(spec),
        "companion": "intrinsic" if f is None else companion_label(f),
        "points": grid.points,
        "samples": grid.samples,
        "seed": grid.seed,
        "eq_tol": grid.eq_tol,
    }
    return Report("gph", passed, best_gap, None if passed else best, metadata)


def check_unit_scale(f: CompanionF, grid: GridSpec = GridSpec()) -> Report:
    """Fail-fast slice of the scaling equation at l = 1: F(1, t) = t.

    The boundary axiom forces it, so any companion violating this line
    cannot satisfy the full equation."""
    g = grid.axis()
    vals = companion_values(f, np.ones_like(g), g)
    res = np.abs(vals - g)
    m = float(res.max())
    passed = m <= grid.eq_tol
    witness = None
    if not passed:
        i = int(np.argmax(np.ravel(res)))
        witness = _witness_from(1.0, 1.0, g[i], vals[i], g[i])
    return Report("unit_scale", passed, m, witness, {
        "companion": companion_label(f),
        "points": grid.points,
        "eq_tol": grid.eq_tol,
        "identity": "F(1, t) = t",
    })


# --------------------------------------------------------------------------
# Companion regularity (the strict pseudo-homogeneity predicate)
# --------------------------------------------------------------------------

def check_pseudo_homogeneous(f: CompanionF, grid: GridSpec = GridSpec()) -> Report:
    """Does the companion meet the stricter regularity demanded of a
    pseudo-homogeneous pairing: increasing in each argument, continuous (at
    grid scale), and F(x, 1) = 0 exactly when x = 0?

    Subtests run in the order (increasing, boundary, continuity); the
    witness comes from the first failing one.  For the boundary test the
    witness is the largest grid x whose F(x, 1) vanishes.
    """
    g = grid.axis()
    X, Y = np.meshgrid(g, g, indexing="ij")
    F = companion_values(f, X, Y)
    tol = grid.eq_tol

    # (a) nondecreasing in each argument
    dx = F[1:, :] - F[:-1, :]
    dy = F[:, 1:] - F[:, :-1]
    inc_violation = max(float(np.maximum(-dx, 0.0).max()),
                        float(np.maximum(-dy, 0.0).max()))
    inc_ok = inc_violation <= tol
    inc_witness = None
    if not inc_ok:
        if float(np.maximum(-dx, 0.0).max()) >= float(np.maximum(-dy, 0.0).max()):
            i, j = np.unravel_index(int(np.argmax(np.ravel(-dx))), dx.shape)
            inc_witness = Witness(1.0, float(g[i + 1]), float(g[j]),
                                  float(F[i + 1, j]), float(F[i, j]),
                                  float(F[i, j] - F[i + 1, j]))
        else:
            i, j = np.unravel_index(int(np.argmax(np.ravel(-dy))), dy.shape)
            inc_witness = Witness(1.0, float(g[i]), float(g[j + 1]),
                                  float(F[i, j + 1]), float(F[i, j]),
                                  float(F[i, j] - F[i, j + 1]))

    # (b) F(x, 1) = 0 iff x = 0
    col = companion_values(f, g, np.ones_like(g))
    zero_ok = float(col[0]) <= tol
    vanishing = (g > 0.0) & (col <= tol)
    boundary_ok = zero_ok and not bool(np.any(vanishing))
    boundary_witness = None
    if np.any(vanishing):
        i = int(np.nonzero(vanishing)[0][-1])  # largest violating x
        boundary_witness = Witness(1.0, float(g[i]), 1.0, float(col[i]),
                                   float(g[i]), float(g[i] - col[i]))
    elif not zero_ok:
        boundary_witness = _witness_from(1.0, 0.0, 1.0, col[0], 0.0)

    # (c) continuity at grid scale
    threshold = CONTINUITY_JUMP_FACTOR * grid.spacing
    jumps = max(float(np.abs(dx).max()), float(np.abs(dy).max()))
    cont_ok = jumps <= threshold
    cont_witness = None
    if not cont_ok:
        adx = np.abs(dx)
        ady = np.abs(dy)
        if float(adx.max()) >= float(ady.max()):
            i, j = np.unravel_index(int(np.argmax(np.ravel(adx))), adx.shape)
            cont_witness = Witness(1.0, float(g[i + 1]), float(g[j]),
                                   float(F[i + 1, j]), float(F[i, j]),
                                   float(adx[i, j]))
        else:
            i, j = np.unravel_index(int(np.argmax(np.ravel(ady))), ady.shape)
            cont_witness = Witness(1.0, float(g[i]), float(g[j + 1]),
                                   float(F[i, j + 1]), float(F[i, j]),
                                   float(ady[i, j]))

    passed = inc_ok and boundary_ok and cont_ok
    witness = None
    if not inc_ok:
        witness = inc_witness
    elif not boundary_ok:
        witness = boundary_witness
    elif not cont_ok:
        witness = cont_witness
    max_residual = 0.0 if passed else float(witness.gap)
    metadata = {
        "companion": companion_label(f),
        "points": grid.points,
        "eq_tol": tol,
        "increasing_ok": inc_ok,
        "increasing_max_violation": inc_violation,
        "boundary_ok": boundary_ok,
        "max_jump": jumps,
        "jump_threshold": threshold,
        "continuous_at_grid_scale": cont_ok,
        "continuity_heuristic": True,
    }
    return Report("pseudo_homogeneous", passed, max_residual, witness, metadata)


# --------------------------------------------------------------------------
# Archimedean limit property
# --------------------------------------------------------------------------

def check_archimedean(spec: TNormSpec,
                      x_probe: Sequence[float] = (0.5, 0.9, 0.99),
                      n_max: int = 10_000,
                      floor: float = 1e-3) -> Report:
    """Limit property: iterated self-composition of each probe must fall
    below ``floor`` within ``n_max`` steps.  A power that stops decreasing
    (an idempotent trap) fails immediately."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not (0.0 < floor < 1.0):
        raise ValueError("floor must lie in (0, 1)")
    minimal_n: dict[str, Optional[int]] = {}
    witness = None
    max_residual = 0.0
    for probe in x_probe:
        if not (0.0 < probe < 1.0):
            raise ValueError(f"probes must lie in (0, 1), got {probe}")
        p = probe
        n = 1
        reached = p < floor
        while not reached and n < n_max:
            nxt = eval_tnorm(spec, probe, p)
            n += 1
            if nxt < floor:
                reached = True
                p = nxt
                break
            if nxt >= p:  # stalled: the power sequence is constant from here
                p = nxt
                n = None
                break
            p = nxt
        key = format(probe, ".12g")
        if reached:
            minimal_n[key] = n
        else:
            minimal_n[key] = None
            gap = p - floor
            max_residual = max(max_residual, gap)
            if witness is None:
                witness = Witness(1.0, float(probe), float(probe), float(p),
                                  float(floor), float(gap))
    passed = witness is None
    metadata = {
        "tnorm": spec_label(spec),
        "n_max": n_max,
        "floor": floor,
        "minimal_n": minimal_n,
        "witness_slots": "x = probe, lhs = smallest power reached, rhs = floor",
    }
    return Report("archimedean", passed, max_residual, witness, metadata)


# --------------------------------------------------------------------------
# Diagonal scan
# --------------------------------------------------------------------------

def scan_diagonal(spec: TNormSpec, grid: GridSpec = GridSpec()) -> Report:
    """Monotonicity of the diagonal, its limit at 1, and the shelf edge.

    The limit estimate is the diagonal at 1 - step_h and must land within
    ``max(eq_tol, 10 * step_h)`` of 0 or of 1 (the only limits a t-norm
    compatible with the scaling equation can have).  A shelf edge is
    reported when a zero plateau on the interior grid is immediately
    followed by identity diagonal values.
    """
    g = grid.axis()
    d = diagonal_values(spec, g)
    tol = grid.eq_tol

    drops = d[:-1] - d[1:]
    mono_violation = float(np.maximum(drops, 0.0).max())
    mono_ok = mono_violation <= grid.strict_tol
    mono_witness = None
    if not mono_ok:
        i = int(np.argmax(np.ravel(drops > grid.strict_tol)))
        mono_witness = Witness(1.0, float(g[i]), float(g[i + 1]),
                               float(d[i + 1]), float(d[i]), float(drops[i]))

    probe = 1.0 - grid.step_h
    limit_estimate = diagonal(spec, probe)
    limit_tol = max(tol, 10.0 * grid.step_h)
    if limit_estimate <= limit_tol:
        limit = 0
    elif 1.0 - limit_estimate <= limit_tol:
        limit = 1
    else:
        limit = None

    # interior plateau / identity structure
    interior = (g > 0.0) & (g < 1.0)
    gi = g[interior]
    di = d[interior]
    is_zero = di <= tol
    is_identity = di >= gi - tol
    zero_on_interior = bool(np.all(is_zero))
    shelf_edge = None
    plateau_end = None
    if not zero_on_interior and is_zero[0]:
        k = int(np.argmin(is_zero))  # first non-plateau index; >=1 here
        if np.all(is_identity[k:]):
            plateau_end = float(gi[k - 1])
            shelf_edge = float(gi[k])

    passed = mono_ok and limit is not None
    witness = None
    if not mono_ok:
        witness = mono_witness
    elif limit is None:
        gap = float(min(limit_estimate, 1.0 - limit_estimate))
        witness = Witness(1.0, probe, probe, float(limit_estimate),
                          float(round(limit_estimate)), gap)
    max_residual = 0.0 if passed else float(witness.gap)
    metadata = {
        "tnorm": spec_label(spec),
        "points": grid.points,
        "eq_tol": tol,
        "monotone_ok": mono_ok,
        "monotone_max_violation": mono_violation,
        "limit_probe": probe,
        "limit_estimate": float(limit_estimate),
        "limit_tol": limit_tol,
        "limit": limit,
        "zero_on_interior": zero_on_interior,
        "plateau_end": plateau_end,
        "shelf_edge": shelf_edge,
    }
    return Report("diagonal_scan", passed, max_residual, witness, metadata)


# --------------------------------------------------------------------------
# Minimum-kind equivalences
# --------------------------------------------------------------------------

def check_tm_equivalences(spec: TNormSpec, grid: GridSpec = GridSpec()) -> Report:
    """Four statements that stand or fall together for any t-norm carrying
    a companion: T = min, F = x*y, F commutative, F(x, 1) = x.  The check
    passes when the truth vector is constant (all true or all false)."""
    g = grid.axis()
    X, Y = np.meshgrid(g, g, indexing="ij")
    T = tnorm_values(spec, X, Y)
    F = companion_values(canonical_f(spec), X, Y)
    col = companion_values(canonical_f(spec), g, np.ones_like(g))
    tol = grid.strict_tol

    # statement -> (lhs table, rhs table, x coords, y coords)
    cases = {
        "t_equals_min": (T, np.minimum(X, Y), X, Y),
        "f_equals_xy": (F, X * Y, X, Y),
        "f_commutative": (F, F.T, X, Y),
        "f_right_neutral": (col, g, g, np.ones_like(g)),
    }
    deviations = {name: np.abs(lhs - rhs) for name, (lhs, rhs, _, _) in cases.items()}
    truth = {name: bool(dev.max() <= tol) for name, dev in deviations.items()}
    values = list(truth.values())
    passed = all(values) or not any(values)

    witness = None
    max_residual = 0.0
    if not passed:
        # first false statement explains the inconsistency
        for name, dev in deviations.items():
            if not truth[name]:
                lhs, rhs, xs, ys = cases[name]
                flat = int(np.argmax(np.ravel(dev)))
                witness = _witness_from(1.0, np.ravel(xs)[flat],
                                        np.ravel(ys)[flat],
                                        np.ravel(lhs)[flat],
                                        np.ravel(rhs)[flat])
                max_residual = witness.gap
                break

    metadata = {
        "tnorm": spec_label(spec),
        "points": grid.points,
        "strict_tol": tol,
        "statements": truth,
        "max_deviation": {k: float(v.max()) for k, v in deviations.items()},
    }
    return Report("tm_equivalences", passed, max_residual, witness, metadata)


# --------------------------------------------------------------------------
# Continuity equivalence
# --------------------------------------------------------------------------

def _max_adjacent_jump(values: np.ndarray) -> tuple[float, tuple[int, int, int]]:
    dx = np.abs(values[1:, :] - values[:-1, :])
    dy = np.abs(values[:, 1:] - values[:, :-1])
    mx = float(dx.max())
    my = float(dy.max())
    if mx >= my:
        i, j = np.unravel_index(int(np.argmax(np.ravel(dx))), dx.shape)
        return mx, (0, int(i), int(j))
    i, j = np.unravel_index(int(np.argmax(np.ravel(dy))), dy.shape)
    return my, (1, int(i), int(j))


def check_continuity_equivalence(spec: TNormSpec,
                                 grid: GridSpec = GridSpec()) -> Report:
    """A t-norm and its companion are continuous together or not at all;
    this verifies the grid-scale surrogate of that equivalence."""
    g = grid.axis()
    X, Y = np.meshgrid(g, g, indexing="ij")
    T = tnorm_values(spec, X, Y)
    F = companion_values(canonical_f(spec), X, Y)
    threshold = CONTINUITY_JUMP_FACTOR * grid.spacing
    t_jump, t_loc = _max_adjacent_jump(T)
    f_jump, f_loc = _max_adjacent_jump(F)
    t_cont = t_jump <= threshold
    f_cont = f_jump <= threshold
    passed = t_cont == f_cont

    witness = None
    if not passed:
        jump, loc, table = ((t_jump, t_loc, T) if t_jump >= f_jump
                            else (f_jump, f_loc, F))
        axis, i, j = loc
        if axis == 0:
            witness = Witness(1.0, float(g[i + 1]), float(g[j]),
                              float(table[i + 1, j]), float(table[i, j]), jump)
        else:
            witness = Witness(1.0, float(g[i]), float(g[j + 1]),
                              float(table[i, j + 1]), float(table[i, j]), jump)

    metadata = {
        "tnorm": spec_label(spec),
        "points": grid.points,
        "jump_threshold": threshold,
        "t_max_jump": t_jump,
        "f_max_jump": f_jump,
        "t_continuous_at_grid_scale": t_cont,
        "f_continuous_at_grid_scale": f_cont,
        "continuity_heuristic": True,
    }
    return Report("continuity_equivalence", passed,
                  0.0 if passed else float(witness.gap), witness, metadata)


# --------------------------------------------------------------------------
# Counterexample search
# --------------------------------------------------------------------------

def find_gph_counterexample(spec: TNormSpec, grid: GridSpec = GridSpec()) -> Report:
    """Hunt for a triple violating the intrinsic scaling equation.

    Ordinal sums are the interesting prey: every non-trivial one fails, and
    for them two targeted constructions are probed per summand [a, e]:

      case 1 (a > 0): scale so l*y pins the idempotent endpoint a exactly
        while the unscaled pair multiplies strictly inside the summand;
      case 2 (e < 1): scale the top corner (e, e) so the scaled pair lands
        strictly inside the summand.

    The returned witness is the largest-gap targeted probe when one
    violates, otherwise the sweep's witness; the full sweep maximum is kept
    in metadata either way.
    """
    sweep = check_gph(spec, None, grid)
    probes = []
    if isinstance(spec, OrdinalSum):
        for s in spec.summands:
            a, e = s.lower, s.upper
            if a > 0.0:
                x = a + 0.8 * (e - a)
                y = a + 0.6 * (e - a)
                probes.append(("case1", a / y, x, y))
            if e < 1.0:
                x = 0.8 * e
                if x <= e * e:
                    x = 0.5 * (e * e + e)
                probes.append(("case2", x / e, e, e))

    targeted = []
    best = None
    best_case = None
    for case, lam, x, y in probes:
        lhs = eval_tnorm(spec, lam * x, lam * y)
        t = eval_tnorm(spec, x, y)
        rhs = eval_tnorm(spec, lam, lam * t)
        w = _witness_from(lam, x, y, lhs, rhs)
        targeted.append({"case": case, "lambda": w.lam, "x": w.x, "y": w.y,
                         "gap": w.gap})
        if best is None or w.gap > best.gap:
            best = w
            best_case = case

    if best is not None and best.gap > grid.eq_tol:
        witness = best
        max_residual = best.gap
        source = best_case
    else:
        witness = sweep.witness
        max_residual = sweep.max_residual
        source = "sweep" if witness is not None else None

    passed = witness is None
    metadata = {
        "tnorm": spec_label(spec),
        "points": grid.points,
        "samples": grid.samples,
        "seed": grid.seed,
        "eq_tol": grid.eq_tol,
        "sweep_max_residual": sweep.max_residual,
        "targeted_probes": targeted,
        "witness_source": source,
    }
    return Report("gph_counterexample", passed, max_residual, witness, metadata)


# --------------------------------------------------------------------------
# CSV dump
# --------------------------------------------------------------------------

RESIDUAL_CSV_HEADER = "lambda,x,y,lhs,rhs,residual"


def residual_rows(spec: TNormSpec, f: Optional[CompanionF],
                  grid: GridSpec = GridSpec()):
    """Yield (lambda, x, y, lhs, rhs, residual) for every grid triple, in
    scan order.  Streams one lambda slice at a time."""
    comp = canonical_f(spec) if f is None else f
    g = grid.axis()
    X, Y = np.meshgrid(g, g, indexing="ij")
    T_xy = tnorm_values(spec, X, Y)
    for lam in g:
        lhs = tnorm_values(spec, lam * X, lam * Y)
        rhs = companion_values(comp, lam, T_xy)
        res = np.abs(lhs - rhs)
        flat_x = np.ravel(X)
        flat_y = np.ravel(Y)
        flat_l = np.ravel(lhs)
        flat_r = np.ravel(rhs)
        flat_g = np.ravel(res)
        for i in range(flat_x.size):
            yield (float(lam), float(flat_x[i]), float(flat_y[i]),
                   float(flat_l[i]), float(flat_r[i]), float(flat_g[i]))
