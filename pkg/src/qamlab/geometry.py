"""Convex geometry primitives: hulls, membership, witnesses, grids, covering radii.

Everything here works on plain ``(n, k)`` float arrays (or :class:`PointSet`
wrappers).  Membership in a convex hull is decided by a self-contained dense
phase-1 simplex over the barycentric feasibility system ``p = sum(lam_i v_i)``,
``lam >= 0``, ``sum(lam) = 1``.  Facet representations are built only for
full-dimensional hulls in dimension <= 3 (monotone chain in 2-D, incremental
hull in 3-D); higher dimensions fall back to the LP oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    DimensionMismatch,
    NotKDimensional,
    NumericalFailure,
    ResolutionTooCoarse,
    ToleranceTooTight,
)

DEFAULT_FEASIBILITY_TOL = 1e-9
RANK_REL_TOL = 1e-8
INTERIOR_MARGIN_FACTOR = 1e-6
_SUPPORT_TOL = 1e-11


# ---------------------------------------------------------------------------
# point containers
# ---------------------------------------------------------------------------

def as_points(obj, dim=None):
    """Coerce to a finite (n, k) float64 array, validating dimensions."""
    if isinstance(obj, PointSet):
        arr = obj.points
    else:
        arr = np.asarray(obj, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if dim == 1 else arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected (n, k) points, got shape {arr.shape}")
    if arr.shape[1] < 1:
        raise DimensionMismatch("points must have dimension k >= 1")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {arr.shape[1]}")
    if not np.isfinite(arr).all():
        raise ValueError("points must have finite coordinates (no NaN/inf)")
    return arr


def as_point(obj, dim=None):
    """Coerce to a single finite k-vector."""
    arr = np.atleast_1d(np.asarray(obj, dtype=float))
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a single point, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {arr.shape[0]}")
    if not np.isfinite(arr).all():
        raise ValueError("point must have finite coordinates (no NaN/inf)")
    return arr


def snap_points(points, delta):
    """Round coordinates to the delta-grid (delta=0 leaves them untouched)."""
    arr = np.asarray(points, dtype=float)
    if delta > 0:
        arr = np.round(arr / delta) * delta
        arr[arr == 0.0] = 0.0  # normalize -0.0
    return arr


def unique_rows(points):
    """Exact row dedup, returned in lexicographic order (deterministic)."""
    arr = np.ascontiguousarray(points, dtype=float)
    if len(arr) <= 1:
        return arr.copy()
    order = np.lexsort(arr.T[::-1])
    s = arr[order]
    keep = np.ones(len(s), dtype=bool)
    np.any(s[1:] != s[:-1], axis=1, out=keep[1:])
    return s[keep]


def _row_view(arr):
    a = np.ascontiguousarray(arr, dtype=float)
    return a.view([("", a.dtype)] * a.shape[1]).ravel()


def rows_member(test, base):
    """Boolean mask: which rows of ``test`` appear (bit-exact) in ``base``."""
    test = np.asarray(test, dtype=float)
    base = np.asarray(base, dtype=float)
    if len(base) == 0:
        return np.zeros(len(test), dtype=bool)
    return np.isin(_row_view(test), _row_view(base))


class PointSet:
    """A finite set of points in R^k, deduplicated at snap resolution.

    Points are snapped to the ``snap``-grid (if positive), deduplicated and
    stored in lexicographic order, so two PointSets built from the same
    mathematical set compare equal elementwise.
    """

    __slots__ = ("points", "snap")

    def __init__(self, points, snap: float = 0.0):
        arr = as_points(points)
        if len(arr) == 0:
            raise ValueError("PointSet must be nonempty")
        if snap < 0:
            raise ValueError("snap resolution must be >= 0")
        self.points = unique_rows(snap_points(arr, snap))
        self.snap = float(snap)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.array_equal(self.points, other.points)
        )

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)}, k={self.dim}, snap={self.snap:g})"


def bounding_box(points):
    arr = as_points(points)
    return arr.min(axis=0), arr.max(axis=0)


def bbox_diagonal(points) -> float:
    lo, hi = bounding_box(points)
    return float(np.linalg.norm(hi - lo))


def affine_rank(points, rel_tol: float = RANK_REL_TOL) -> int:
    """Rank of the centered point matrix, with singular values below
    ``rel_tol * s_max`` treated as zero."""
    arr = as_points(points)
    if len(arr) == 1:
        return 0
    centered = arr - arr.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False)
    if svals[0] <= 0.0:
        return 0
    return int(np.count_nonzero(svals > rel_tol * svals[0]))


# ---------------------------------------------------------------------------
# LP feasibility (dense phase-1 simplex, Bland's rule)
# ---------------------------------------------------------------------------

def _phase1_simplex(A, b, tol):
    """Minimize the artificial-variable sum for A x = b, x >= 0.

    Returns (w, x) where w is the residual infeasibility and x the structural
    solution.  Raises NumericalFailure if the pivot budget is exhausted.
    """
    m, n = A.shape
    A = A.copy()
    b = b.copy()
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # tableau: n structural columns, m artificial columns, rhs
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = A.sum(axis=0)
    T[m, -1] = b.sum()
    basis = list(range(n, n + m))

    piv_tol = max(tol, 1e-13)
    max_iter = 100 * (n + m) + 200
    for _ in range(max_iter):
        # Bland: smallest structural index with positive reduced cost
        eligible = np.nonzero(T[m, :n] > piv_tol)[0]
        if len(eligible) == 0:
            break
        j = int(eligible[0])
        col = T[:m, j]
        rows = np.nonzero(col > piv_tol)[0]
        if len(rows) == 0:
            raise NumericalFailure("phase-1 simplex: unbounded pivot column")
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + piv_tol * (1.0 + abs(best))]
        i = int(min(tied, key=lambda r: basis[r]))
        # pivot on (i, j)
        T[i] /= T[i, j]
        for r in range(m + 1):
            if r != i and T[r, j] != 0.0:
                T[r] -= T[r, j] * T[i]
        basis[i] = j
    else:
        raise NumericalFailure("phase-1 simplex did not converge")

    x = np.zeros(n)
    for r, jb in enumerate(basis):
        if jb < n:
            x[jb] = T[r, -1]
    return float(T[m, -1]), x


def convex_coefficients(p, V, tol: float = DEFAULT_FEASIBILITY_TOL):
    """Barycentric coefficients of p over V, or None if p is outside conv(V)."""
    V = as_points(V)
    p = as_point(p, V.shape[1])
    if tol <= 0:
        raise ValueError("tol must be > 0")
    # rows: k coordinate equations + the convexity equation, scaled to O(1)
    A = np.vstack([V.T, np.ones(len(V))])
    b = np.concatenate([p, [1.0]])
    scale = np.maximum(1.0, np.abs(A).max(axis=1))
    A = A / scale[:, None]
    b = b / scale
    w, lam = _phase1_simplex(A, b, tol)
    if w > tol * max(1.0, np.abs(b).max()) * (len(b) + 1):
        return None
    return lam


def in_hull(p, V, tol: float = DEFAULT_FEASIBILITY_TOL) -> bool:
    """True iff p is a convex combination of rows of V, within tolerance."""
    return convex_coefficients(p, V, tol) is not None


def in_interior(p, V, margin: float | None = None,
                tol: float = DEFAULT_FEASIBILITY_TOL) -> bool:
    """Margin-ball interior test.

    True iff conv(V) is full-dimensional and the closed sup-norm ball of
    radius ``margin`` around p lies inside conv(V), probed at p and at
    p +/- margin*e_i.  This is a quantitative proxy for the topological
    interior; points within ``margin`` of the boundary may be misclassified.
    """
    V = as_points(V)
    k = V.shape[1]
    p = as_point(p, k)
    if margin is None:
        margin = INTERIOR_MARGIN_FACTOR * max(bbox_diagonal(V), 1.0)
    if margin <= 0:
        raise ValueError("margin must be > 0")
    if affine_rank(V) < k:
        return False
    if not in_hull(p, V, tol):
        return False
    for i in range(k):
        for sign in (1.0, -1.0):
            q = p.copy()
            q[i] += sign * margin
            if not in_hull(q, V, tol):
                return False
    return True


# ---------------------------------------------------------------------------
# hulls
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hull:
    """V-representation of a convex hull, with optional facet inequalities.

    ``vertices`` holds the extreme points only.  In 2-D (full-dimensional)
    they are in counterclockwise ring order; otherwise lexicographic.
    ``facets = (normals, offsets)`` with unit outward normals satisfies
    ``normals @ x <= offsets`` for hull points; present only when the hull is
    full-dimensional and k <= 3.
    """

    vertices: np.ndarray
    affine_dim: int
    facets: tuple | None = None
    bbox: tuple = field(default=None)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    def diameter(self) -> float:
        v = self.vertices
        if len(v) == 1:
            return 0.0
        if len(v) <= 400:
            d = v[:, None, :] - v[None, :, :]
            return float(np.sqrt((d * d).sum(axis=2)).max())
        lo, hi = self.bbox
        return float(np.linalg.norm(hi - lo))

    def contains(self, points, tol: float = DEFAULT_FEASIBILITY_TOL):
        """Vectorized membership; boolean array for (n, k) input."""
        pts = as_points(points, self.dim)
        if self.facets is not None:
            normals, offsets = self.facets
            slack = tol * max(1.0, float(np.abs(offsets).max()))
            ok = (pts @ normals.T - offsets <= slack).all(axis=1)
        else:
            ok = np.fromiter(
                (in_hull(q, self.vertices, tol) for q in pts),
                dtype=bool, count=len(pts),
            )
        return ok

    def contains_interior(self, points, margin: float,
                          tol: float = DEFAULT_FEASIBILITY_TOL):
        """Vectorized margin-ball interior test (see :func:`in_interior`)."""
        pts = as_points(points, self.dim)
        if not self.full_dimensional:
            return np.zeros(len(pts), dtype=bool)
        if self.facets is not None:
            normals, offsets = self.facets
            # probing q +/- margin*e_i against n.x <= b is equivalent to
            # n.q + margin*max_i|n_i| <= b
            bump = margin * np.abs(normals).max(axis=1)
            slack = tol * max(1.0, float(np.abs(offsets).max()))
            ok = (pts @ normals.T + bump - offsets <= slack).all(axis=1)
        else:
            ok = np.fromiter(
                (in_interior(q, self.vertices, margin, tol) for q in pts),
                dtype=bool, count=len(pts),
            )
        return ok


def _monotone_chain(points):
    """2-D convex hull, CCW vertex ring, collinear points dropped."""
    pts = unique_rows(points)
    span = max(1.0, float(np.abs(pts).max()))
    eps = 1e-12 * span * span

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for q in pts:
        while len(lower) > 1 and cross(lower[-2], lower[-1], q) <= eps:
            lower.pop()
        lower.append(q)
    upper = []
    for q in pts[::-1]:
        while len(upper) > 1 and cross(upper[-2], upper[-1], q) <= eps:
            upper.pop()
        upper.append(q)
    return np.array(lower[:-1] + upper[:-1])


def _polygon_facets(ring):
    """Outward edge normals of a CCW polygon ring."""
    nxt = np.roll(ring, -1, axis=0)
    edges = nxt - ring
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
    norms = np.linalg.norm(normals, axis=1)
    normals = normals / norms[:, None]
    offsets = np.einsum("ij,ij->i", normals, ring)
    return normals, offsets


def _initial_tetrahedron(pts, eps):
    i0 = 0
    d = np.linalg.norm(pts - pts[i0], axis=1)
    i1 = int(d.argmax())
    seg = pts[i1] - pts[i0]
    rel = pts - pts[i0]
    cr = np.cross(np.broadcast_to(seg, rel.shape), rel)
    area = np.linalg.norm(cr, axis=1)
    i2 = int(area.argmax())
    n = np.cross(pts[i1] - pts[i0], pts[i2] - pts[i0])
    vol = np.abs(rel @ n)
    i3 = int(vol.argmax())
    if area[i2] <= eps or vol[i3] <= eps * max(1.0, area[i2]):
        raise NotKDimensional("point set is not 3-dimensional")
    return i0, i1, i2, i3


def _hull_3d_facets(points):
    """Incremental 3-D hull; returns oriented triangle index triples."""
    pts = unique_rows(points)
    scale = max(1.0, bbox_diagonal(pts))
    eps = 1e-9 * scale
    i0, i1, i2, i3 = _initial_tetrahedron(pts, eps)
    interior = pts[[i0, i1, i2, i3]].mean(axis=0)

    def oriented(a, b, c):
        n = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        if n @ (interior - pts[a]) > 0:
            return (a, c, b)
        return (a, b, c)

    faces = {oriented(i0, i1, i2), oriented(i0, i1, i3),
             oriented(i0, i2, i3), oriented(i1, i2, i3)}

    def face_plane(f):
        a, b, c = f
        n = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        nn = np.linalg.norm(n)
        return n / nn, (n / nn) @ pts[a]

    rest = [i for i in range(len(pts)) if i not in {i0, i1, i2, i3}]
    for ip in rest:
        p = pts[ip]
        visible = []
        for f in faces:
            n, off = face_plane(f)
            if n @ p - off > eps:
                visible.append(f)
        if not visible:
            continue
        vis_edges = set()
        for (a, b, c) in visible:
            vis_edges.update([(a, b), (b, c), (c, a)])
        horizon = [(u, v) for (u, v) in vis_edges if (v, u) not in vis_edges]
        for f in visible:
            faces.discard(f)
        for (u, v) in horizon:
            faces.add(oriented(u, v, ip))
    return pts, sorted(faces)


def convex_hull(V) -> Hull:
    """Convex hull of a finite point set: extreme vertices, affine dimension,
    and facet inequalities when the hull is full-dimensional with k <= 3.

    For k > 3 (or degenerate hulls in k in {2, 3}) no facets are built and
    membership queries fall back to the LP oracle.
    """
    pts = unique_rows(as_points(V))
    if len(pts) == 0:
        raise ValueError("convex_hull requires a nonempty point set")
    k = pts.shape[1]
    adim = affine_rank(pts)
    bbox = (pts.min(axis=0), pts.max(axis=0))

    if adim == 0:
        return Hull(pts[:1].copy(), 0, None, bbox)

    if k == 1:
        verts = np.array([[pts[:, 0].min()], [pts[:, 0].max()]])
        normals = np.array([[1.0], [-1.0]])
        offsets = np.array([verts[1, 0], -verts[0, 0]])
        return Hull(verts, 1, (normals, offsets), bbox)

    if k == 2 and adim == 2:
        ring = _monotone_chain(pts)
        return Hull(ring, 2, _polygon_facets(ring), bbox)

    if k == 3 and adim == 3:
        pts_u, faces = _hull_3d_facets(pts)
        normals = []
        offsets = []
        for f in faces:
            a, b, c = f
            n = np.cross(pts_u[b] - pts_u[a], pts_u[c] - pts_u[a])
            nn = np.linalg.norm(n)
            normals.append(n / nn)
            offsets.append((n / nn) @ pts_u[a])
        normals = np.array(normals)
        offsets = np.array(offsets)
        cand_idx = sorted({i for f in faces for i in f})
        cand = pts_u[cand_idx]
        verts = unique_rows(cand[_extreme_mask(cand)])
        return Hull(verts, 3, (normals, offsets), bbox)

    # degenerate hull, or k > 3: extreme points via the LP oracle
    verts = unique_rows(pts[_extreme_mask(pts)])
    return Hull(verts, adim, None, bbox)


def _extreme_mask(pts):
    """Boolean mask of points not expressible over the remaining ones."""
    n = len(pts)
    if n <= 2:
        return np.ones(n, dtype=bool)
    mask = np.ones(n, dtype=bool)
    idx = np.arange(n)
    for i in range(n):
        others = pts[idx != i]
        if in_hull(pts[i], others):
            mask[i] = False
    return mask


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

def caratheodory_witness(p, V, tol: float = DEFAULT_FEASIBILITY_TOL):
    """A subset U of V with at most k+1 points whose hull still contains p.

    Starts from any feasible barycentric solution and repeatedly removes a
    point by shifting the coefficients along an affine dependence, which is
    the constructive form of the k+1 bound.
    """
    V = as_points(V)
    k = V.shape[1]
    p = as_point(p, k)

    scale = max(1.0, float(np.abs(V).max()))
    exact = np.nonzero(np.abs(V - p).max(axis=1) <= tol * scale)[0]
    if len(exact):
        return V[exact[:1]].copy()

    lam = convex_coefficients(p, V, tol)
    if lam is None:
        raise ValueError("caratheodory_witness: point is not in conv(V)")

    support = np.nonzero(lam > _SUPPORT_TOL)[0]
    lam = lam.copy()
    while len(support) > k + 1:
        X = V[support]
        # affine dependence: mu with sum(mu)=0 and sum(mu_i x_i)=0
        M = np.vstack([X.T, np.ones(len(X))])
        _, _, vh = np.linalg.svd(M)
        mu = vh[-1]
        if np.abs(mu).max() <= 0:
            raise NumericalFailure("degenerate affine dependence")
        if mu.max() <= 0:
            mu = -mu
        pos = mu > _SUPPORT_TOL
        ratios = np.full(len(mu), np.inf)
        ratios[pos] = lam[support][pos] / mu[pos]
        t = ratios.min()
        new = lam[support] - t * mu
        new[ratios == t] = 0.0
        lam[support] = np.maximum(new, 0.0)
        support = support[lam[support] > _SUPPORT_TOL]
    return V[np.sort(support)].copy()


def gustin_witness(p, V, margin: float | None = None,
                   tol: float = DEFAULT_FEASIBILITY_TOL):
    """A subset U of V, |U| <= 2k, whose hull interior still contains p.

    Subsets are searched in increasing size starting at k+1, lexicographic
    within each size, so witnesses are reproducible.  If nothing is found at
    the requested margin the margin is relaxed by decades down to a floor;
    exhausting the floor raises ToleranceTooTight.
    """
    V = as_points(V)
    k = V.shape[1]
    p = as_point(p, k)
    if margin is None:
        margin = INTERIOR_MARGIN_FACTOR * max(bbox_diagonal(V), 1.0)
    if not in_interior(p, V, margin, tol):
        raise ValueError("gustin_witness: point is not in the margin-interior of conv(V)")

    n = len(V)
    floor = max(margin * 1e-6, 1e-12)
    m = margin
    while m >= floor:
        for size in range(k + 1, min(2 * k, n) + 1):
            for combo in itertools.combinations(range(n), size):
                U = V[list(combo)]
                if in_interior(p, U, m, tol):
                    return U.copy()
        m /= 10.0
    raise ToleranceTooTight(
        f"no interior witness of size <= {2 * k} found down to margin {floor:g}"
    )


# ---------------------------------------------------------------------------
# grids and distances
# ---------------------------------------------------------------------------

def grid_sample(hull: Hull, resolution: float, interior_only: bool = False,
                margin: float | None = None,
                tol: float = DEFAULT_FEASIBILITY_TOL):
    """Axis-aligned grid points of pitch ``resolution`` inside the hull.

    The grid is anchored at the hull's bounding-box min corner.  Requires a
    full-dimensional hull.  Raises ResolutionTooCoarse when nothing survives
    the membership filter.
    """
    if resolution <= 0:
        raise ValueError("resolution must be > 0")
    if not hull.full_dimensional:
        raise NotKDimensional(
            f"grid_sample requires a full-dimensional hull "
            f"(affine_dim {hull.affine_dim} < k {hull.dim})"
        )
    lo, hi = hull.bbox
    axes = []
    for i in range(hull.dim):
        count = int(np.floor((hi[i] - lo[i]) / resolution + 1e-9)) + 1
        axes.append(lo[i] + resolution * np.arange(count))
    total = int(np.prod([len(a) for a in axes]))
    if total > 20_000_000:
        raise ResolutionTooCoarse(
            f"grid of {total} candidate points is too fine to enumerate"
        )
    mesh = np.meshgrid(*axes, indexing="ij")
    cand = np.stack([m.ravel() for m in mesh], axis=1)
    if interior_only:
        if margin is None:
            margin = INTERIOR_MARGIN_FACTOR * max(
                float(np.linalg.norm(hi - lo)), 1.0)
        keep = hull.contains_interior(cand, margin, tol)
    else:
        keep = hull.contains(cand, tol)
    result = cand[keep]
    if len(result) == 0:
        raise ResolutionTooCoarse(
            f"resolution {resolution:g} leaves no grid point inside the hull "
            f"(diameter {hull.diameter():g})"
        )
    return PointSet(result)


def covering_radius(targets, cover) -> float:
    """Directed Hausdorff distance: max over targets of the Euclidean
    distance to the nearest cover point."""
    T = as_points(targets)
    C = as_points(cover)
    if len(T) == 0 or len(C) == 0:
        raise ValueError("covering_radius requires nonempty point sets")
    if T.shape[1] != C.shape[1]:
        raise DimensionMismatch(
            f"targets have dimension {T.shape[1]}, cover {C.shape[1]}")
    dists, _ = cKDTree(C).query(T, k=1)
    return float(np.max(dists))


def _segment_distance(p, a, b) -> float:
    """Distance from p to the segment [a, b]."""
    ab = b - a
    denom = ab @ ab
    t = 0.0 if denom <= 0.0 else min(1.0, max(0.0, ((p - a) @ ab) / denom))
    return float(np.linalg.norm(a + t * ab - p))


def _triangle_distance(p, a, b, c) -> float:
    """Distance from p to the (possibly degenerate) triangle abc in 3-D."""
    u, v, w = b - a, c - a, p - a
    uu, uv, vv = u @ u, u @ v, v @ v
    det = uu * vv - uv * uv
    if det > 1e-16 * max(uu, vv, 1.0) ** 2:
        s = (vv * (w @ u) - uv * (w @ v)) / det
        t = (uu * (w @ v) - uv * (w @ u)) / det
        if s >= 0.0 and t >= 0.0 and s + t <= 1.0:
            return float(np.linalg.norm(a + s * u + t * v - p))
    return min(_segment_distance(p, a, b), _segment_distance(p, a, c),
               _segment_distance(p, b, c))


def _dist_pairwise_fw(p, V, max_iter: int) -> float:
    """Min-distance to conv(V) by pairwise Frank-Wolfe (away steps), the
    fallback when no closed-form projection applies."""
    scale = max(1.0, float(np.abs(V).max()))
    lam = np.zeros(len(V))
    start = int(np.linalg.norm(V - p, axis=1).argmin())
    lam[start] = 1.0
    x = V[start].astype(float).copy()
    for _ in range(max_iter):
        g = x - p
        scores = V @ g
        s = int(scores.argmin())
        active = np.flatnonzero(lam > 0.0)
        a = active[int(scores[active].argmax())]
        if g @ (x - V[s]) <= 1e-14 * scale * scale:
            break
        d = V[s] - V[a]
        dd = d @ d
        if dd <= 0.0:
            break
        t = min(lam[a], max(0.0, -(g @ d) / dd))
        if t <= 0.0:
            break
        lam[s] += t
        lam[a] -= t
        x = x + t * d
    return float(np.linalg.norm(x - p))


def dist_to_hull(p, V, max_iter: int = 2048) -> float:
    """Euclidean distance from p to conv(V).

    Exact edge/facet projections cover everything up to 3-D; higher (or
    degenerate embedded) hulls fall back to an away-step Frank-Wolfe.
    Used for reporting violation margins; membership decisions stay with
    the LP oracle.
    """
    V = unique_rows(as_points(V))
    k = V.shape[1]
    p = as_point(p, k)

    if len(V) == 1:
        return float(np.linalg.norm(V[0] - p))
    if k == 1:
        lo, hi = V[:, 0].min(), V[:, 0].max()
        return float(max(lo - p[0], p[0] - hi, 0.0))

    adim = affine_rank(V)
    if adim <= 1:
        # all points on one line: the two extremes span the hull
        span = V @ (V[-1] - V[0])
        return _segment_distance(p, V[int(span.argmin())],
                                 V[int(span.argmax())])
    if in_hull(p, V):
        return 0.0
    if k == 2:
        ring = _monotone_chain(V)
        return min(_segment_distance(p, ring[i], ring[(i + 1) % len(ring)])
                   for i in range(len(ring)))
    if k == 3 and adim == 3:
        pts, faces = _hull_3d_facets(V)
        return min(_triangle_distance(p, pts[i], pts[j], pts[l])
                   for i, j, l in faces)
    return _dist_pairwise_fw(p, V, max_iter)
