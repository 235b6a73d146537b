"""Quasi-arithmetic means, the induced set operator, and iterated orbits.

The central objects: ``qam`` evaluates f^{-1}(sum gamma_i f(x_i)) for one
tuple; ``mean_step`` applies the set operator (all ordered m-tuples, or a
seeded subsample past ``tuple_budget``); ``iterate`` produces the orbit
generation by generation with snap-grid pruning; ``weight_orbit`` runs the
analogous recursion on the weight simplex itself, where the covering-radius
bound alpha_max^n * sqrt(h-1) can be checked directly.

Determinism: whenever tuples are subsampled, the RNG stream is keyed by
(seed, stream, generation), so a rerun with the same seed reproduces the
orbit bit for bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainViolation, OrbitCapExceeded, PointOutsideImage
from .generators import ROUND_TRIP_TOL, Generator
from .geometry import (
    PointSet,
    as_points,
    bbox_diagonal,
    covering_radius,
    rows_member,
    snap_points,
    unique_rows,
)

DEFAULT_TUPLE_BUDGET = 2_000_000
DEFAULT_MAX_POINTS = 200_000
DEFAULT_SEED = 42
MEAN_CLAMP_SLACK = 1e-12

# RNG stream tags: tuple subsampling, saturation thinning, weight orbit
_STREAM_TUPLES, _STREAM_CAP, _STREAM_WEIGHTS = 0, 1, 2


@dataclass(frozen=True)
class Weights:
    """Positive mixing weights alpha_1..alpha_m, m >= 2, summing to 1."""

    values: np.ndarray

    def __init__(self, values):
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size < 2:
            raise ValueError("need at least two weights")
        if not np.isfinite(arr).all() or (arr <= 0).any():
            raise ValueError("weights must be finite and strictly positive")
        if abs(arr.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 (got {arr.sum()!r})")
        if arr.max() >= 1.0:
            raise ValueError("each weight must be < 1")
        object.__setattr__(self, "values", arr)

    @property
    def m(self) -> int:
        return self.values.size

    @property
    def alpha_max(self) -> float:
        return float(self.values.max())


@dataclass(frozen=True)
class SimplexWeights:
    """A barycentric coordinate vector: h >= 2 nonnegative entries, sum 1.

    Zero entries are legal (they drop the corresponding point from the
    combination), unlike the strictly positive operator weights."""

    values: np.ndarray

    def __init__(self, values):
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size < 2:
            raise ValueError("need at least two coordinates")
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise ValueError("coordinates must be finite and nonnegative")
        if abs(arr.sum() - 1.0) > 1e-12:
            raise ValueError(f"coordinates must sum to 1 (got {arr.sum()!r})")
        object.__setattr__(self, "values", arr)

    @property
    def h(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class OrbitState:
    """One orbit generation: the snapped point set plus bookkeeping flags."""

    n: int
    set: PointSet
    prune_resolution: float
    saturated: bool = False
    exhaustive: bool = True


def _gamma_values(gamma):
    if isinstance(gamma, (Weights, SimplexWeights)):
        return gamma.values
    return SimplexWeights(gamma).values


def _combine(weights, rows):
    """sum_j w_j * rows[j], accumulated in index order so that the scalar
    and batched paths produce bitwise-identical results."""
    acc = weights[0] * rows[0]
    for j in range(1, len(weights)):
        acc = acc + weights[j] * rows[j]
    return acc


def _invert_means(g: Generator, combos: np.ndarray, describe_tuple):
    """Map combined f-values back through f^{-1}, with the tolerated
    rounding slack; attaches the offending tuple to any failure."""
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        cand = g.inverse_array(combos)
    finite = np.isfinite(cand).all(axis=1)
    if not finite.all():
        i = int(np.argmin(finite))
        raise PointOutsideImage(
            f"{g.name}: mean of {describe_tuple(i)} has no preimage "
            f"(combined image {combos[i].tolist()})")
    ext = g.domain.exterior_distance(cand)
    worst = int(np.argmax(ext))
    if ext[worst] > MEAN_CLAMP_SLACK:
        raise DomainViolation(
            f"{g.name}: mean of {describe_tuple(worst)} lands "
            f"{ext[worst]:.3e} outside the domain — the image of f is not "
            f"convex over this set")
    cand = g.domain.clamp_inside(cand, slack=MEAN_CLAMP_SLACK)
    back = g.forward_array(cand)
    scale = max(1.0, float(np.abs(combos).max()))
    err = np.abs(back - combos).max(axis=1)
    worst = int(np.argmax(err))
    if err[worst] > ROUND_TRIP_TOL * scale:
        raise PointOutsideImage(
            f"{g.name}: inverse round-trip error {err[worst]:.3e} on mean of "
            f"{describe_tuple(worst)}")
    return cand


def qam(g: Generator, gamma, points) -> np.ndarray:
    """The quasi-arithmetic mean f^{-1}(sum gamma_i f(x_i)).

    ``gamma`` may be Weights, SimplexWeights, or a bare coordinate vector;
    ``points`` is an (h, k) stack matching gamma's length.  All points must
    lie in the generator's domain, and the result must land back in it
    (up to the documented 1e-12 rounding clamp).
    """
    gam = _gamma_values(gamma)
    pts = as_points(points, g.dim)
    if len(pts) != gam.size:
        raise ValueError(
            f"got {len(pts)} points for {gam.size} weights")
    inside = g.domain.contains(pts)
    if not inside.all():
        i = int(np.argmin(inside))
        raise DomainViolation(
            f"{g.name}: point {pts[i].tolist()} is outside the domain")
    fv = g.forward_array(pts)
    combo = _combine(gam, fv)
    out = _invert_means(g, combo.reshape(1, -1),
                        lambda _i: pts.tolist())
    return out[0]


def _tuple_indices(n_points: int, m: int, budget: int, rng):
    """All ordered m-tuple index rows when n^m fits the budget, otherwise a
    seeded uniform subsample of exactly ``budget`` rows."""
    total = n_points ** m
    if total <= budget:
        grids = np.meshgrid(*([np.arange(n_points)] * m), indexing="ij")
        idx = np.stack([a.ravel() for a in grids], axis=1)
        return idx, True
    return rng.integers(0, n_points, size=(budget, m)), False


def mean_step(g: Generator, w: Weights, state: OrbitState, *,
              tuple_budget: int = DEFAULT_TUPLE_BUDGET,
              max_points: int = DEFAULT_MAX_POINTS,
              seed: int = DEFAULT_SEED) -> OrbitState:
    """One application of the set operator: means of all m-tuples, unioned
    with the input set, snapped to the prune grid.

    Beyond ``tuple_budget`` ordered tuples the enumeration switches to a
    seeded subsample (flagged by ``exhaustive=False`` on the result); beyond
    ``max_points`` the new points are thinned by a seeded draw and the state
    is flagged ``saturated``.  The input set is always a subset of the
    result, so generations grow monotonically at snap resolution.
    """
    S = state.set.points
    delta = state.prune_resolution
    F = g.forward_array(S)

    rng = np.random.default_rng([seed, _STREAM_TUPLES, state.n])
    idx, exhaustive = _tuple_indices(len(S), w.m, tuple_budget, rng)
    combos = _combine(w.values, [F[idx[:, j]] for j in range(w.m)])
    means = _invert_means(
        g, combos, lambda i: [S[j].tolist() for j in idx[i]])

    old = S
    new = unique_rows(snap_points(means, delta))
    new = new[~rows_member(new, old)]
    if delta > 0 and len(new):
        # snapping can shove a near-boundary mean just outside the open
        # domain; pull those back rather than reject them
        new = g.domain.clamp_inside(new, slack=delta + MEAN_CLAMP_SLACK)
        new = unique_rows(new)
        new = new[~rows_member(new, old)]

    saturated = False
    if len(old) + len(new) > max_points:
        keep = max_points - len(old)
        if keep < 0:
            raise OrbitCapExceeded(
                f"orbit already holds {len(old)} points, above the cap "
                f"{max_points}")
        cap_rng = np.random.default_rng([seed, _STREAM_CAP, state.n])
        sel = cap_rng.choice(len(new), size=keep, replace=False)
        new = new[np.sort(sel)]
        saturated = True

    # old is kept verbatim and new is already snapped (and possibly pulled
    # off-grid by the boundary clamp), so the union must not snap again
    merged = PointSet(np.vstack([old, new]) if len(new) else old)
    return OrbitState(state.n + 1, merged, delta,
                      saturated=saturated or state.saturated,
                      exhaustive=exhaustive and state.exhaustive)


def iterate(g: Generator, w: Weights, s0, n_max: int,
            delta: float | None = None, *,
            max_points: int = DEFAULT_MAX_POINTS,
            tuple_budget: int = DEFAULT_TUPLE_BUDGET,
            seed: int = DEFAULT_SEED) -> list[OrbitState]:
    """Orbit generations 0..n_max (stopping early at a fixed point).

    ``delta`` defaults to 1e-3 times the bounding-box diagonal of the seed
    set; pass 0 for exact (unpruned) enumeration.  The returned list is
    shorter than n_max+1 exactly when a step changed nothing at resolution
    delta.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    S0 = as_points(s0, g.dim)
    if not g.domain.contains(S0).all():
        bad = S0[~g.domain.contains(S0)][0]
        raise DomainViolation(
            f"{g.name}: seed point {bad.tolist()} is outside the domain")
    if delta is None:
        diag = bbox_diagonal(S0)
        delta = 1e-3 * diag
    state = OrbitState(0, PointSet(S0, snap=delta), float(delta))
    states = [state]
    for _ in range(n_max):
        nxt = mean_step(g, w, state, tuple_budget=tuple_budget,
                        max_points=max_points, seed=seed)
        if nxt.set == state.set:
            break
        states.append(nxt)
        state = nxt
    return states


def is_fixed_point(g: Generator, w: Weights, s, delta: float, *,
                   tuple_budget: int = DEFAULT_TUPLE_BUDGET,
                   seed: int = DEFAULT_SEED) -> bool:
    """True iff one operator application adds nothing farther than ``delta``
    from the given set."""
    S = as_points(s, g.dim)
    if not g.domain.contains(S).all():
        raise DomainViolation(f"{g.name}: set is not inside the domain")
    if len(S) == 1:
        return True
    F = g.forward_array(S)
    rng = np.random.default_rng([seed, _STREAM_TUPLES, 0])
    idx, _ = _tuple_indices(len(S), w.m, tuple_budget, rng)
    combos = _combine(w.values, [F[idx[:, j]] for j in range(w.m)])
    means = _invert_means(
        g, combos, lambda i: [S[j].tolist() for j in idx[i]])
    dists, _ = cKDTree(S).query(means, k=1)
    return bool(dists.max() <= delta)


# ---------------------------------------------------------------------------
# the weight-simplex orbit
# ---------------------------------------------------------------------------

def simplex_grid(h: int, pitch: float) -> np.ndarray:
    """Barycentric reference grid on the (h-1)-simplex: all coordinate
    vectors with entries that are multiples of ``pitch`` summing to 1."""
    if h < 2:
        raise ValueError("h must be >= 2")
    if pitch <= 0 or pitch > 1:
        raise ValueError("pitch must be in (0, 1]")
    steps = int(round(1.0 / pitch))
    rows = []
    for cuts in itertools.combinations(range(steps + h - 1), h - 1):
        prev = -1
        parts = []
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(steps + h - 2 - prev)
        rows.append(parts)
    return np.asarray(rows, dtype=float) / steps


def _dedup_snapped(arr: np.ndarray, snap: float) -> np.ndarray:
    """Drop rows that collide on the snap grid, keeping the first occurrence
    of each cell (original, unsnapped values — so exact row sums survive)."""
    keys = np.round(arr / snap).astype(np.int64)
    view = np.ascontiguousarray(keys).view(
        [("", np.int64)] * keys.shape[1]).ravel()
    _, first = np.unique(view, return_index=True)
    return arr[np.sort(first)]


def weight_orbit(w: Weights, h: int, n: int, *,
                 tuple_budget: int = 500_000,
                 max_points: int = 5_000_000,
                 ref_pitch: float = 0.02,
                 snap: float = 1e-9,
                 seed: int = DEFAULT_SEED):
    """The n-th weight orbit on the (h-1)-simplex and its covering radius.

    Starts from the h unit vectors and repeatedly forms all (or a seeded
    subsample of) weighted combinations sum_j alpha_j gamma^(j), keeping the
    union of generations.  Returns ``(points, radius)`` where ``points`` is
    the (N, h) array of barycentric vectors (rows sum to 1 within 1e-12,
    deduplicated at ``snap`` resolution, lexicographically sorted) and
    ``radius`` is the covering radius of the pitch-``ref_pitch`` reference
    grid by the orbit.
    """
    if h < 2:
        raise ValueError("h must be >= 2")
    if n < 0:
        raise ValueError("n must be >= 0")
    W = np.eye(h)
    for step in range(1, n + 1):
        rng = np.random.default_rng([seed, _STREAM_WEIGHTS, step])
        idx, _ = _tuple_indices(len(W), w.m, tuple_budget, rng)
        cand = _combine(w.values, [W[idx[:, j]] for j in range(w.m)])
        W = _dedup_snapped(np.vstack([W, cand]), snap)
        if len(W) > max_points:
            raise OrbitCapExceeded(
                f"weight orbit reached {len(W)} points at generation {step} "
                f"(cap {max_points}); reduce n")
    order = np.lexsort(W.T[::-1])
    W = W[order]
    radius = covering_radius(simplex_grid(h, ref_pitch), W)
    return W, radius
