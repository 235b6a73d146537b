import numpy as np
import pytest

from qamlab.errors import (DimensionMismatch, NotKDimensional,
                           ResolutionTooCoarse, ToleranceTooTight)
from qamlab.geometry import (Hull, PointSet, affine_rank, as_point, as_points,
                             bbox_diagonal, bounding_box, caratheodory_witness,
                             convex_coefficients, convex_hull, covering_radius,
                             dist_to_hull, grid_sample, gustin_witness,
                             in_hull, in_interior, rows_member, snap_points,
                             unique_rows)

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
CUBE = np.array([[x, y, z] for x in (0.0, 1.0) for y in (0.0, 1.0)
                 for z in (0.0, 1.0)])


# ---------------------------------------------------------------------------
# coercion and snapping
# ---------------------------------------------------------------------------

def test_as_points_coerces_lists():
    arr = as_points([[1, 2], [3, 4]])
    assert arr.dtype == np.float64
    assert arr.shape == (2, 2)


def test_as_points_rejects_wrong_dimension():
    with pytest.raises(DimensionMismatch):
        as_points([[1.0, 2.0]], 3)


def test_as_points_rejects_non_finite():
    with pytest.raises(ValueError):
        as_points([[np.nan, 0.0]])


def test_as_point_shape():
    p = as_point([1.0, 2.0], 2)
    assert p.shape == (2,)
    with pytest.raises(DimensionMismatch):
        as_point([1.0, 2.0, 3.0], 2)


def test_snap_points_rounds_to_grid():
    out = snap_points([[0.12349, -0.0004]], 0.001)
    assert out[0, 0] == pytest.approx(0.123, abs=0)
    assert out[0, 1] == 0.0  # -0.0 normalized away
    assert not np.signbit(out[0, 1])


def test_snap_points_idempotent():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(50, 3))
    once = snap_points(pts, 1e-3)
    assert np.array_equal(once, snap_points(once, 1e-3))


def test_snap_zero_is_identity():
    pts = np.array([[0.1234567, 1.0]])
    assert np.array_equal(snap_points(pts, 0.0), pts)


def test_unique_rows_sorts_and_dedups():
    arr = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    out = unique_rows(arr)
    assert np.array_equal(out, [[0.0, 1.0], [1.0, 0.0]])


def test_rows_member_bit_exact():
    base = np.array([[0.1, 0.2], [0.3, 0.4]])
    probe = np.array([[0.3, 0.4], [0.1, 0.2 + 1e-17], [0.5, 0.5]])
    member = rows_member(probe, base)
    # 1e-17 is below half an ulp of 0.2, so the second row is bitwise equal
    assert member.tolist() == [True, True, False]


def test_pointset_dedup_and_equality():
    a = PointSet([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0]])
    b = PointSet([[1.0, 1.0], [0.0, 0.0]])
    assert len(a) == 2
    assert a == b


def test_pointset_snap_merges_close_points():
    s = PointSet([[0.1001], [0.1002]], snap=0.001)
    assert len(s) == 1


def test_pointset_rejects_empty():
    with pytest.raises(ValueError):
        PointSet(np.empty((0, 2)))


# ---------------------------------------------------------------------------
# bounding boxes and rank
# ---------------------------------------------------------------------------

def test_bounding_box_and_diagonal():
    lo, hi = bounding_box(SQUARE)
    assert np.array_equal(lo, [0.0, 0.0])
    assert np.array_equal(hi, [1.0, 1.0])
    assert bbox_diagonal(SQUARE) == pytest.approx(np.sqrt(2.0), rel=1e-15)


@pytest.mark.parametrize("pts,rank", [
    ([[2.0, 3.0], [2.0, 3.0]], 0),
    ([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]], 1),
    (SQUARE, 2),
    (CUBE, 3),
])
def test_affine_rank(pts, rank):
    assert affine_rank(pts) == rank


# ---------------------------------------------------------------------------
# barycentric feasibility
# ---------------------------------------------------------------------------

def test_convex_coefficients_reconstruct():
    p = np.array([0.25, 0.4])
    lam = convex_coefficients(p, SQUARE)
    assert lam is not None
    assert lam.sum() == pytest.approx(1.0, abs=1e-9)
    assert (lam >= -1e-12).all()
    assert np.allclose(lam @ SQUARE, p, atol=1e-9)


def test_convex_coefficients_outside_is_none():
    assert convex_coefficients([1.5, 0.5], SQUARE) is None
    assert convex_coefficients([-0.01, 0.5], SQUARE) is None


def test_in_hull_boundary_point():
    assert in_hull([0.5, 0.0], SQUARE)
    assert in_hull([1.0, 1.0], SQUARE)


def test_in_hull_scaling_invariance():
    # the feasibility tolerance is relative, so scaled copies must agree
    for factor in (1e-3, 1.0, 1e4):
        V = SQUARE * factor
        assert in_hull(np.array([0.5, 0.5]) * factor, V)
        assert not in_hull(np.array([1.1, 0.5]) * factor, V)


def test_in_interior_respects_margin():
    assert in_interior([0.5, 0.5], SQUARE, margin=0.01)
    # a point closer to the boundary than the margin ball is not interior
    assert not in_interior([0.005, 0.5], SQUARE, margin=0.01)
    assert not in_interior([0.5, 0.0], SQUARE, margin=0.01)


def test_in_interior_degenerate_set_is_false():
    assert not in_interior([0.5, 0.5], [[0.0, 0.0], [1.0, 1.0]], margin=1e-6)


# ---------------------------------------------------------------------------
# convex_hull
# ---------------------------------------------------------------------------

def test_hull_interval():
    h = convex_hull([[3.0], [1.0], [2.0]])
    assert h.affine_dim == 1
    assert np.array_equal(np.sort(h.vertices[:, 0]), [1.0, 3.0])
    assert h.contains([[1.5]])[0]
    assert not h.contains([[3.5]])[0]


def test_hull_square_ring():
    inner = np.array([[0.5, 0.5], [0.25, 0.75]])
    h = convex_hull(np.vstack([SQUARE, inner]))
    assert h.affine_dim == 2
    assert len(h.vertices) == 4
    # ring order: consecutive vertices share an edge of the square
    d = np.linalg.norm(np.roll(h.vertices, -1, axis=0) - h.vertices, axis=1)
    assert np.allclose(d, 1.0)


def test_hull_collinear_is_degenerate():
    h = convex_hull([[0.0, 0.0], [1.0, 1.0], [0.5, 0.5]])
    assert h.affine_dim == 1
    assert not h.full_dimensional
    assert h.facets is None
    assert h.contains([[0.25, 0.25]])[0]
    assert not h.contains([[0.25, 0.3]])[0]


def test_hull_cube_membership_matches_lp():
    h = convex_hull(CUBE)
    assert h.affine_dim == 3
    assert len(h.vertices) == 8
    rng = np.random.default_rng(11)
    probes = rng.uniform(-0.3, 1.3, size=(200, 3))
    facet_side = h.contains(probes)
    lp_side = np.array([in_hull(p, CUBE) for p in probes])
    # keep clear of the boundary, where the two tolerances may differ
    clear = np.abs(probes - 0.5).max(axis=1) < 0.49
    clear |= np.abs(probes - 0.5).max(axis=1) > 0.51
    assert np.array_equal(facet_side[clear], lp_side[clear])


def test_hull_4d_extreme_points():
    # 4-D cross-polytope plus interior noise: only the 8 axis points survive
    axes = np.vstack([np.eye(4), -np.eye(4)])
    rng = np.random.default_rng(5)
    lam = rng.dirichlet(np.ones(8), size=20)
    h = convex_hull(np.vstack([axes, 0.9 * (lam @ axes)]))
    assert h.affine_dim == 4
    assert h.facets is None
    assert len(h.vertices) == 8
    assert h.contains([[0.2, 0.2, 0.2, 0.2]])[0]
    assert not h.contains([[0.3, 0.3, 0.3, 0.3]])[0]


def test_hull_diameter():
    h = convex_hull(SQUARE)
    assert h.diameter() == pytest.approx(np.sqrt(2.0), rel=1e-15)


def test_hull_contains_interior_vectorized():
    h = convex_hull(SQUARE)
    probes = np.array([[0.5, 0.5], [0.001, 0.5], [1.2, 0.5]])
    got = h.contains_interior(probes, margin=0.01)
    assert got.tolist() == [True, False, False]


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

def test_caratheodory_at_most_k_plus_one():
    pts = np.vstack([SQUARE, [[0.3, 0.3], [0.6, 0.2]]])
    U = caratheodory_witness([0.45, 0.35], pts)
    assert len(U) <= 3
    assert in_hull([0.45, 0.35], U)


def test_caratheodory_vertex_shortcut():
    U = caratheodory_witness([1.0, 1.0], SQUARE)
    assert len(U) == 1
    assert np.array_equal(U[0], [1.0, 1.0])


def test_caratheodory_outside_raises():
    with pytest.raises(ValueError):
        caratheodory_witness([2.0, 2.0], SQUARE)


def test_gustin_square_center():
    # no triangle of axis-aligned square corners keeps the center interior
    # with room to spare on both sides of its hypotenuse; need all four
    U = gustin_witness([0.5, 0.5], SQUARE, margin=0.05)
    assert len(U) <= 4
    assert in_interior([0.5, 0.5], U, margin=1e-9)


def test_gustin_off_center_needs_three():
    U = gustin_witness([0.25, 0.3], SQUARE, margin=1e-6)
    assert len(U) == 3
    assert in_interior([0.25, 0.3], U, margin=1e-9)


def test_gustin_rejects_non_interior_point():
    with pytest.raises(ValueError):
        gustin_witness([0.5, 0.0], SQUARE)
    with pytest.raises(ValueError):
        gustin_witness([0.5, 0.5], [[0.0, 0.0], [1.0, 1.0]])


def test_gustin_margin_ladder_relaxes():
    # on a regular pentagon no 4-vertex subset keeps a 0.75 sup-ball of the
    # center interior, so the requested margin has to be relaxed before a
    # small witness appears
    ang = np.deg2rad([90.0, 162.0, 234.0, 306.0, 18.0])
    V = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    U = gustin_witness([0.0, 0.0], V, margin=0.75)
    assert 3 <= len(U) <= 4
    assert in_interior([0.0, 0.0], U, margin=1e-9)


# ---------------------------------------------------------------------------
# grids, covering radius, distances
# ---------------------------------------------------------------------------

def test_grid_sample_counts():
    h = convex_hull(SQUARE)
    g = grid_sample(h, 0.25)
    assert len(g) == 25  # 5 x 5, anchored at the bbox corner
    assert rows_member(np.array([[0.0, 0.0], [1.0, 1.0]]), g.points).all()


def test_grid_sample_interior_only():
    h = convex_hull(SQUARE)
    g = grid_sample(h, 0.25, interior_only=True, margin=0.01)
    assert len(g) == 9
    assert g.points.min() >= 0.25 - 1e-12


def test_grid_sample_triangle_respects_hull():
    h = convex_hull([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    g = grid_sample(h, 0.5)
    # (1, 0.5), (0.5, 1), (1, 1) fall outside the triangle
    assert len(g) == 6


def test_grid_sample_rejects_degenerate_hull():
    h = convex_hull([[0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(NotKDimensional):
        grid_sample(h, 0.1)


def test_grid_sample_too_coarse():
    h = convex_hull(SQUARE)
    with pytest.raises(ResolutionTooCoarse):
        grid_sample(h, 10.0, interior_only=True, margin=0.2)


def test_covering_radius_oracle():
    targets = np.array([[0.0], [0.5], [1.0]])
    assert covering_radius(targets, [[0.0], [1.0]]) == 0.5
    assert covering_radius(targets, targets) == 0.0


def test_covering_radius_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        covering_radius([[0.0, 1.0]], [[0.0]])


def test_dist_to_hull_inside_is_zero():
    assert dist_to_hull([0.5, 0.5], SQUARE) == 0.0
    assert dist_to_hull([1.0, 0.5], SQUARE) == 0.0


def test_dist_to_hull_triangle_edge_projection():
    # distance from (1.5, 3.25) to the triangle with lower edge v = 3u - 1
    # is |3*1.5 - 3.25 - 1| / sqrt(10), the classic point-line formula
    tri = [[1.0, 2.0], [2.0, 5.0], [1.5, 6.25]]
    assert dist_to_hull([1.5, 3.25], tri) == pytest.approx(
        0.25 / np.sqrt(10.0), abs=1e-14)


def test_dist_to_hull_segment_clamps_to_endpoint():
    d = dist_to_hull([1.5, 4.5], [[1.0, 2.0], [2.0, 4.0]])
    assert d == pytest.approx(np.sqrt(0.5), abs=1e-14)


def test_dist_to_hull_interval():
    assert dist_to_hull([2.0], [[0.0], [1.0]]) == 1.0
    assert dist_to_hull([0.3], [[0.0], [1.0]]) == 0.0


def test_dist_to_hull_cube_corner():
    assert dist_to_hull([2.0, 2.0, 2.0], CUBE) == pytest.approx(
        np.sqrt(3.0), abs=1e-12)


def test_dist_to_hull_4d_simplex():
    # nearest point of conv{e1..e4} to the origin is the barycenter
    V = np.eye(4)
    assert dist_to_hull(np.zeros(4), V) == pytest.approx(0.5, abs=1e-9)


def test_dist_to_hull_matches_brute_force():
    rng = np.random.default_rng(23)
    for k in (2, 3):
        for _ in range(20):
            V = rng.normal(size=(7, k))
            q = rng.normal(size=k) * 1.5
            lam = rng.dirichlet(np.ones(7), size=3000)
            brute = np.linalg.norm(lam @ V - q, axis=1).min()
            d = dist_to_hull(q, V)
            assert d <= brute + 1e-9
