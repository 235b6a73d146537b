"""Executable generator conditions: orbit density, interior-image inclusion,
hull-image inclusion, the bounded-subset cover property, and the consistency
join between them.

Naming: ``check_density`` measures whether the orbit fills the hull of S at
grid resolution; ``check_interior_inclusion`` tests f[int conv S] against
int conv f[S]; ``check_hull_inclusion`` tests f[conv S] against conv f[S];
``subset_cover_property`` tests that interior image points are already
covered (up to a margin) by hulls of images of small subsets of S.  For a
finite S all of density/interior/hull must agree; ``consistency_report``
flags any contradiction that survives cross-checking.

All checkers are deterministic given (inputs, seed): structured sample
points (grid points, vertices, pair midpoints, centroid) are scanned before
any seeded random draws, so failures reproduce without seed hunting.
"""

from __future__ import annotations

import itertools
import time

import numpy as np

from .errors import NotKDimensional, SubsetBudgetExceeded
from .generators import Generator, apply
from .geometry import (
    DEFAULT_FEASIBILITY_TOL,
    Hull,
    affine_rank,
    as_points,
    bbox_diagonal,
    convex_hull,
    covering_radius,
    dist_to_hull,
    grid_sample,
    in_hull,
    in_interior,
    unique_rows,
)
from .means import (
    DEFAULT_MAX_POINTS,
    DEFAULT_SEED,
    DEFAULT_TUPLE_BUDGET,
    OrbitState,
    PointSet,
    Weights,
    mean_step,
)
from .reports import (
    DENSE,
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    NOT_DENSE,
    ConditionVerdict,
    DensityReport,
)

DEFAULT_SAMPLE_COUNT = 256
STALL_WINDOW = 3          # consecutive sub-1% radius changes that mean "stalled"
STALL_REL_CHANGE = 0.01
INTERIOR_GRID_DIVISIONS = 12


def _default_margin(S) -> float:
    return 1e-6 * max(bbox_diagonal(S), 1.0)


# ---------------------------------------------------------------------------
# density (orbit coverage of the hull grid)
# ---------------------------------------------------------------------------

def check_density(g: Generator, w: Weights, S, n_max: int = 8,
                  grid_resolution: float | None = None,
                  delta: float | None = None, *,
                  max_points: int = DEFAULT_MAX_POINTS,
                  tuple_budget: int = DEFAULT_TUPLE_BUDGET,
                  seed: int = DEFAULT_SEED) -> DensityReport:
    """Iterate the orbit and measure how well it covers a grid of conv(S).

    Requires S to be full-dimensional (a hull with empty interior has no
    meaningful density target).  Verdict: ``dense-at-resolution`` when the
    final covering radius drops to 2x the working resolution,
    ``not-dense`` when the radius stalls (three consecutive relative changes
    under 1%) while still above 5x the grid resolution, ``inconclusive``
    otherwise.  The radius column is non-increasing because each generation
    contains the previous one.
    """
    pts = as_points(S, g.dim)
    diag = bbox_diagonal(pts)
    if grid_resolution is None:
        grid_resolution = 0.02 * diag
    if delta is None:
        delta = 1e-3 * diag
    hull = convex_hull(pts)
    if not hull.full_dimensional:
        raise NotKDimensional(
            f"density needs a full-dimensional seed set "
            f"(affine_dim {hull.affine_dim} < {hull.dim})")
    targets = grid_sample(hull, grid_resolution).points

    state = OrbitState(0, PointSet(pts, snap=delta), float(delta))
    states = [state]
    rows = []
    timings = []
    converged_at = None
    t0 = time.perf_counter()
    radius = covering_radius(targets, state.set.points)
    timings.append(1e3 * (time.perf_counter() - t0))
    rows.append({"n": 0, "set_size": len(state.set), "covering_radius": radius})
    for _ in range(n_max):
        t0 = time.perf_counter()
        nxt = mean_step(g, w, state, tuple_budget=tuple_budget,
                        max_points=max_points, seed=seed)
        if nxt.set == state.set:
            converged_at = state.n
            break
        radius = covering_radius(targets, nxt.set.points)
        timings.append(1e3 * (time.perf_counter() - t0))
        rows.append({"n": nxt.n, "set_size": len(nxt.set),
                     "covering_radius": radius})
        states.append(nxt)
        state = nxt

    radii = [r["covering_radius"] for r in rows]
    final = radii[-1]
    dense_threshold = 2.0 * max(grid_resolution, delta)
    stalled = converged_at is not None
    if len(radii) > STALL_WINDOW:
        tail = radii[-(STALL_WINDOW + 1):]
        rel = [abs(a - b) / max(b, 1e-30) for b, a in zip(tail, tail[1:])]
        stalled = stalled or all(c < STALL_REL_CHANGE for c in rel)
    if final <= dense_threshold:
        verdict = DENSE
    elif stalled and final > 5.0 * grid_resolution:
        verdict = NOT_DENSE
    else:
        verdict = INCONCLUSIVE

    notes = []
    sampled_from = next((s.n for s in states if not s.exhaustive), None)
    if sampled_from is not None:
        notes.append(
            f"tuple enumeration subsampled from generation {sampled_from} "
            f"(budget {tuple_budget})")
    if any(s.saturated for s in states):
        notes.append(f"orbit size capped at {max_points} points")
    if converged_at is not None:
        notes.append(f"converged at n={converged_at} "
                     f"(no change at resolution {delta:g})")

    return DensityReport(
        rows=rows, verdict=verdict, resolution=float(grid_resolution),
        prune_resolution=float(delta), converged_at=converged_at,
        parameters={"n_max": n_max, "max_points": max_points,
                    "tuple_budget": tuple_budget, "seed": seed,
                    "grid_points": len(targets)},
        notes=notes, states=states, timings_ms=timings,
    )


# ---------------------------------------------------------------------------
# sample generation shared by the inclusion checkers
# ---------------------------------------------------------------------------

def _hull_mix_samples(hull: Hull, count: int, rng) -> np.ndarray:
    """Points of conv(V): vertices, all pairwise midpoints, centroid, then
    seeded random barycentric mixes of the vertices."""
    verts = hull.vertices
    chunks = [verts]
    if len(verts) > 1:
        pairs = np.array(list(itertools.combinations(range(len(verts)), 2)))
        chunks.append(0.5 * (verts[pairs[:, 0]] + verts[pairs[:, 1]]))
    chunks.append(verts.mean(axis=0, keepdims=True))
    structured = np.vstack(chunks)
    n_random = max(0, count - len(structured))
    if n_random:
        lam = rng.dirichlet(np.ones(len(verts)), size=n_random)
        chunks.append(lam @ verts)
    return np.vstack(chunks)


def _interior_samples(hull: Hull, margin: float, count: int, rng,
                      tol: float) -> np.ndarray:
    """Points of int conv(V) with sup-ball clearance ``margin``: an interior
    grid, the centroid, then filtered random barycentric mixes."""
    pitch = max(hull.diameter() / INTERIOR_GRID_DIVISIONS, 10.0 * margin)
    try:
        grid = grid_sample(hull, pitch, interior_only=True,
                           margin=margin, tol=tol).points
    except Exception:
        grid = np.empty((0, hull.dim))
    chunks = [grid]
    centroid = hull.vertices.mean(axis=0, keepdims=True)
    if hull.contains_interior(centroid, margin, tol)[0]:
        chunks.append(centroid)
    n_random = max(0, count - sum(len(c) for c in chunks))
    if n_random:
        lam = rng.dirichlet(np.ones(len(hull.vertices)), size=2 * n_random)
        mix = lam @ hull.vertices
        keep = hull.contains_interior(mix, margin, tol)
        chunks.append(mix[keep][:n_random])
    chunks = [c for c in chunks if len(c)]
    if not chunks:
        return np.empty((0, hull.dim))
    return np.vstack(chunks)


def _exterior_margin(q, image_points, tol) -> float:
    """Distance of q to conv(image_points) if genuinely outside, else 0."""
    d = dist_to_hull(q, image_points)
    scale = max(1.0, float(np.abs(image_points).max()))
    return d if d > tol * scale else 0.0


# ---------------------------------------------------------------------------
# interior-image inclusion
# ---------------------------------------------------------------------------

def check_interior_inclusion(g: Generator, S,
                             sample_count: int = DEFAULT_SAMPLE_COUNT,
                             margin: float | None = None,
                             seed: int = DEFAULT_SEED, *,
                             tol: float = DEFAULT_FEASIBILITY_TOL) -> ConditionVerdict:
    """Does f map the interior of conv(S) into the interior of conv(f[S])?

    Samples margin-interior points of conv(S); a sample fails when its image
    leaves the interior of the image hull *by a quantifiable distance*.
    Images that merely graze the image-hull boundary (within tolerance of
    it, a known artifact of the margin-ball interior proxy) are recorded as
    notes, not failures.  A rank-deficient image set fails immediately: its
    hull has no interior at all.
    """
    pts = unique_rows(as_points(S, g.dim))
    hull = convex_hull(pts)
    if not hull.full_dimensional:
        raise NotKDimensional(
            f"interior-inclusion needs a full-dimensional S "
            f"(affine_dim {hull.affine_dim} < {hull.dim})")
    if margin is None:
        margin = _default_margin(pts)
    params = {"sample_count": int(sample_count), "margin": float(margin),
              "seed": int(seed), "tol": float(tol), "set_size": len(pts)}

    images = apply(g, pts)
    k = g.dim
    if affine_rank(images) < k:
        centroid = pts.mean(axis=0)
        return ConditionVerdict(
            condition="interior-inclusion", status=FAILS,
            witness={"point": centroid.tolist(),
                     "image": apply(g, centroid).tolist(),
                     "margin": float("inf")},
            parameters=params,
            notes=["f[S] is rank-deficient: conv(f[S]) has empty interior"],
        )

    rng = np.random.default_rng([seed, 3])
    samples = _interior_samples(hull, margin, sample_count, rng, tol)
    if len(samples) == 0:
        return ConditionVerdict(
            condition="interior-inclusion", status=HOLDS, parameters=params,
            notes=["no interior samples at this margin; vacuous"])
    mapped = apply(g, samples)
    grazing = 0
    for p, q in zip(samples, mapped):
        if in_interior(q, images, margin, tol):
            continue
        out_by = _exterior_margin(q, images, tol)
        if out_by > 0.0:
            return ConditionVerdict(
                condition="interior-inclusion", status=FAILS,
                witness={"point": p.tolist(), "image": q.tolist(),
                         "margin": out_by},
                parameters=params,
                notes=[f"image point exits conv(f[S]) by {out_by:.6g}"],
            )
        grazing += 1
    notes = [f"{len(samples)} interior samples tested"]
    if grazing:
        notes.append(
            f"{grazing} image(s) within {margin:g} of the image-hull "
            f"boundary (interior proxy cannot classify them)")
    return ConditionVerdict(condition="interior-inclusion", status=HOLDS,
                            parameters=params, notes=notes)


# ---------------------------------------------------------------------------
# hull-image inclusion
# ---------------------------------------------------------------------------

def check_hull_inclusion(g: Generator, S,
                         sample_count: int = DEFAULT_SAMPLE_COUNT,
                         tol: float = DEFAULT_FEASIBILITY_TOL,
                         seed: int = DEFAULT_SEED) -> ConditionVerdict:
    """Does f map conv(S) into conv(f[S])?

    Samples conv(S) (vertices, pairwise midpoints, centroid, random mixes)
    and LP-tests each image against the hull of the image points.  Fails on
    the first image with positive exterior distance.
    """
    pts = unique_rows(as_points(S, g.dim))
    hull = convex_hull(pts)
    images = apply(g, pts)
    image_hull = convex_hull(images)
    params = {"sample_count": int(sample_count), "tol": float(tol),
              "seed": int(seed), "set_size": len(pts)}

    rng = np.random.default_rng([seed, 4])
    samples = _hull_mix_samples(hull, sample_count, rng)
    if hull.full_dimensional:
        # replay the interior checker's sample pool (same stream, same
        # margin), so any strict-exterior witness it can find is provably
        # within reach of this checker too
        inner = _interior_samples(hull, _default_margin(pts), sample_count,
                                  np.random.default_rng([seed, 3]), tol)
        samples = np.vstack([samples, inner])
    mapped = apply(g, samples)
    member = image_hull.contains(mapped, tol)
    for p, q, ok in zip(samples, mapped, member):
        if ok:
            continue
        out_by = _exterior_margin(q, image_hull.vertices, tol)
        if out_by > 0.0:
            return ConditionVerdict(
                condition="hull-inclusion", status=FAILS,
                witness={"point": p.tolist(), "image": q.tolist(),
                         "margin": out_by},
                parameters=params,
                notes=[f"image point exits conv(f[S]) by {out_by:.6g}"],
            )
    return ConditionVerdict(condition="hull-inclusion", status=HOLDS,
                            parameters=params,
                            notes=[f"{len(samples)} hull samples tested"])


# ---------------------------------------------------------------------------
# bounded-subset cover of interior image points
# ---------------------------------------------------------------------------

def subset_cover_property(g: Generator, S,
                          sample_count: int = 64,
                          margin: float | None = None,
                          seed: int = DEFAULT_SEED, *,
                          tol: float = DEFAULT_FEASIBILITY_TOL,
                          max_set_size: int = 12) -> ConditionVerdict:
    """Every sampled point whose image lies inside conv(f[S]) must already
    lie within ``margin`` of conv(f[T]) for some subset T of S with at most
    2k elements and full-dimensional image hull.

    Subset enumeration is exponential in |S|, so sets above ``max_set_size``
    are rejected outright.
    """
    pts = unique_rows(as_points(S, g.dim))
    if len(pts) > max_set_size:
        raise SubsetBudgetExceeded(
            f"|S| = {len(pts)} exceeds the subset-enumeration budget "
            f"({max_set_size})")
    k = g.dim
    if margin is None:
        margin = _default_margin(pts)
    params = {"sample_count": int(sample_count), "margin": float(margin),
              "seed": int(seed), "set_size": len(pts),
              "max_subset_size": 2 * k}

    images = apply(g, pts)
    hull = convex_hull(pts)
    rng = np.random.default_rng([seed, 5])
    samples = _hull_mix_samples(hull, sample_count, rng)
    mapped = apply(g, samples)
    inside = np.fromiter(
        (in_interior(q, images, margin, tol) for q in mapped),
        dtype=bool, count=len(mapped))
    samples, mapped = samples[inside], mapped[inside]
    if len(samples) == 0:
        return ConditionVerdict(
            condition="subset-cover", status=HOLDS, parameters=params,
            notes=["no sample mapped into the image-hull interior; vacuous"])

    sizes = range(k + 1, min(2 * k, len(pts)) + 1)
    subset_pool = [list(c) for size in sizes
                   for c in itertools.combinations(range(len(pts)), size)]
    full_rank = {tuple(c): affine_rank(images[c]) == k for c in subset_pool}

    checked = 0
    for p, q in zip(samples, mapped):
        best = np.inf
        covered = False
        for c in subset_pool:
            if not full_rank[tuple(c)]:
                continue
            d = dist_to_hull(q, images[c])
            best = min(best, d)
            if d <= margin:
                covered = True
                break
        if not covered:
            return ConditionVerdict(
                condition="subset-cover", status=FAILS,
                witness={"point": p.tolist(), "image": q.tolist(),
                         "margin": float(best)},
                parameters=params,
                notes=[f"nearest small-subset hull is {best:.6g} away "
                       f"(allowed {margin:g})"],
            )
        checked += 1
    return ConditionVerdict(
        condition="subset-cover", status=HOLDS, parameters=params,
        notes=[f"{checked} interior image points covered by subsets of "
               f"size <= {2 * k}"])


# ---------------------------------------------------------------------------
# consistency across the checkers
# ---------------------------------------------------------------------------

def _verdict_token(v) -> str:
    if isinstance(v, DensityReport):
        return v.verdict
    return v.status


def join_consistency(density: DensityReport | None,
                     interior: ConditionVerdict | None,
                     hull_inclusion: ConditionVerdict | None, *,
                     non_compact_surrogate: bool = False) -> dict:
    """Compare the three verdicts against the implications that must hold.

    For a finite S all three conditions are equivalent; the inclusion
    ``hull holds -> interior must not fail`` is required unconditionally.
    When S stands in for a non-compact set, or a witness margin falls below
    the density grid resolution, mismatches are annotated instead of flagged
    as violations.
    """
    violations = []
    annotations = []
    flags = []
    if non_compact_surrogate:
        flags.append("non-compact-surrogate")

    d = density.verdict if density is not None else None
    res = density.resolution if density is not None else 0.0
    ii = interior.status if interior is not None else None
    iii = hull_inclusion.status if hull_inclusion is not None else None

    def w_margin(v):
        return v.witness.get("margin", 0.0) if (v and v.witness) else 0.0

    # hull inclusion implies interior inclusion, compact or not
    if iii == HOLDS and ii == FAILS:
        violations.append(
            "hull-inclusion holds but interior-inclusion fails "
            f"(witness margin {w_margin(interior):.6g}) — "
            "the inclusion chain is broken")

    # density <-> interior inclusion (any S)
    if d == DENSE and ii == FAILS:
        if w_margin(interior) < res:
            annotations.append(
                "interior-inclusion witness margin "
                f"{w_margin(interior):.6g} is below the density resolution "
                f"{res:g}; verdicts are indistinguishable at this scale")
        else:
            violations.append(
                "orbit is dense at resolution but interior-inclusion fails "
                "with a witness above that resolution")
    if d == NOT_DENSE and ii == HOLDS and iii == HOLDS:
        violations.append(
            "both inclusions hold up to sampling but the orbit radius "
            "stalled — density should follow from interior-inclusion")

    # hull inclusion <-> density needs compactness; surrogates are exempt
    if d == DENSE and iii == FAILS:
        if non_compact_surrogate:
            annotations.append(
                "hull-inclusion fails while the orbit is dense: expected "
                "for a finite stand-in of a non-compact set")
        elif w_margin(hull_inclusion) < res:
            annotations.append(
                "hull-inclusion witness margin "
                f"{w_margin(hull_inclusion):.6g} is below the density "
                f"resolution {res:g}")
        else:
            violations.append(
                "orbit is dense at resolution but hull-inclusion fails with "
                "a witness above that resolution (S is finite and compact)")

    return {
        "verdicts": {"density": d, "interior-inclusion": ii,
                     "hull-inclusion": iii},
        "theorem_violation": bool(violations),
        "violations": violations,
        "annotations": annotations,
        "flags": flags,
    }


def consistency_report(g: Generator, w: Weights, S, *,
                       n_max: int = 8,
                       grid_resolution: float | None = None,
                       delta: float | None = None,
                       sample_count: int = DEFAULT_SAMPLE_COUNT,
                       margin: float | None = None,
                       tol: float = DEFAULT_FEASIBILITY_TOL,
                       seed: int = DEFAULT_SEED,
                       max_points: int = DEFAULT_MAX_POINTS,
                       tuple_budget: int = DEFAULT_TUPLE_BUDGET,
                       non_compact_surrogate: bool = False,
                       density: DensityReport | None = None,
                       interior: ConditionVerdict | None = None,
                       hull_inclusion: ConditionVerdict | None = None) -> dict:
    """Run (or reuse) all three checkers on one (generator, weights, set)
    triple and join the verdicts.

    An interior-inclusion failure whose image point is strictly outside the
    image hull is re-tested against hull inclusion directly, so sampling
    luck cannot produce a spurious contradiction between the two.
    """
    pts = unique_rows(as_points(S, g.dim))
    if density is None:
        density = check_density(g, w, pts, n_max, grid_resolution, delta,
                                max_points=max_points,
                                tuple_budget=tuple_budget, seed=seed)
    if interior is None:
        interior = check_interior_inclusion(g, pts, sample_count, margin,
                                            seed, tol=tol)
    if hull_inclusion is None:
        hull_inclusion = check_hull_inclusion(g, pts, sample_count, tol, seed)

    # cross-feed: an exterior interior-inclusion witness is a hull-inclusion
    # witness too (the sampled point lies in conv(S) by construction)
    if (interior.status == FAILS and hull_inclusion.status == HOLDS
            and interior.witness and np.isfinite(interior.witness["margin"])
            and interior.witness["margin"] > 0):
        q = np.asarray(interior.witness["image"], dtype=float)
        images = apply(g, pts)
        if not in_hull(q, images, tol):
            hull_inclusion = ConditionVerdict(
                condition="hull-inclusion", status=FAILS,
                witness=dict(interior.witness),
                parameters=dict(hull_inclusion.parameters),
                notes=hull_inclusion.notes + [
                    "witness adopted from the interior-inclusion check"],
            )

    joined = join_consistency(density, interior, hull_inclusion,
                              non_compact_surrogate=non_compact_surrogate)
    joined["reports"] = {"density": density, "interior-inclusion": interior,
                         "hull-inclusion": hull_inclusion}
    return joined
