import numpy as np
import pytest

from qamlab.errors import DomainViolation, PointOutsideImage
from qamlab.generators import (Domain, apply, check_convex_image,
                               coordinatewise_exp, coordinatewise_log,
                               coordinatewise_power, full_space,
                               generator_names, identity, invert,
                               make_generator, open_ball, open_box,
                               parabola_radial, parabola_shear,
                               positive_orthant, square_to_ball, tabulated)


# ---------------------------------------------------------------------------
# domains
# ---------------------------------------------------------------------------

def test_full_space_contains_everything():
    d = full_space(3)
    assert d.contains([[1e12, -1e12, 0.0]]).all()
    assert d.exterior_distance([[5.0, 5.0, 5.0]])[0] == 0.0


def test_positive_orthant_is_open():
    d = positive_orthant(2)
    assert d.contains([[0.1, 2.0]])[0]
    assert not d.contains([[0.0, 1.0]])[0]
    assert not d.contains([[-0.5, 1.0]])[0]
    assert d.exterior_distance([[-0.5, 1.0]])[0] == pytest.approx(0.5)


def test_open_box_membership():
    d = open_box([0.0, 0.0], [1.0, 2.0])
    assert d.contains([[0.5, 1.9]])[0]
    assert not d.contains([[1.0, 1.0]])[0]
    assert d.exterior_distance([[1.25, 1.0]])[0] == pytest.approx(0.25)


def test_open_ball_membership():
    d = open_ball([0.0, 0.0], 1.0)
    assert d.contains([[0.5, 0.5]])[0]
    assert not d.contains([[1.0, 0.0]])[0]


def test_clamp_inside_nudges_and_rejects():
    d = open_box([0.0, 0.0], [1.0, 1.0])
    out = d.clamp_inside(np.array([[1.0 + 1e-13, 0.5]]), slack=1e-12)
    assert d.contains(out).all()
    with pytest.raises(DomainViolation):
        d.clamp_inside(np.array([[1.1, 0.5]]), slack=1e-12)


def test_domain_sample_stays_inside():
    rng = np.random.default_rng(0)
    for d in (positive_orthant(2), open_box([0, -1], [2, 1]),
              open_ball([1.0, 1.0], 0.5), full_space(2)):
        pts = d.sample(64, rng)
        assert pts.shape == (64, 2)
        assert d.contains(pts).all()


# ---------------------------------------------------------------------------
# forward / inverse
# ---------------------------------------------------------------------------

def test_identity_is_identity():
    g = identity(2)
    pts = np.array([[1.0, -2.0], [0.0, 3.5]])
    assert np.array_equal(apply(g, pts), pts)
    assert np.array_equal(invert(g, pts), pts)


def test_apply_single_point_returns_vector():
    g = identity(2)
    out = apply(g, [1.0, 2.0])
    assert out.shape == (2,)


def test_log_exact_values():
    g = coordinatewise_log(2)
    out = apply(g, [[np.e, 1.0]])
    assert np.allclose(out, [[1.0, 0.0]], atol=1e-15)
    assert np.allclose(invert(g, out), [[np.e, 1.0]], rtol=1e-15)


def test_log_rejects_nonpositive_input():
    g = coordinatewise_log(2)
    with pytest.raises(DomainViolation):
        apply(g, [[-1.0, 1.0]])


def test_power_values_and_zero_exponent():
    g = coordinatewise_power(2.0, 2)
    assert np.allclose(apply(g, [[2.0, 3.0]]), [[4.0, 9.0]])
    assert np.allclose(invert(g, [[4.0, 9.0]]), [[2.0, 3.0]])
    with pytest.raises(ValueError):
        coordinatewise_power(0.0, 2)


def test_power_inverse_rejects_negative_image_point():
    g = coordinatewise_power(2.0, 1)
    with pytest.raises(PointOutsideImage):
        invert(g, [[-1.0]])


def test_exp_inverse_rejects_nonpositive():
    g = coordinatewise_exp(2)
    assert np.allclose(invert(g, [[1.0, np.e]]), [[0.0, 1.0]], atol=1e-15)
    with pytest.raises(PointOutsideImage):
        invert(g, [[-1.0, 1.0]])


def test_parabola_radial_roundtrip():
    g = parabola_radial()
    assert np.allclose(apply(g, [[1.0, 1.0], [2.0, 2.0]]),
                       [[1.0, 2.0], [2.0, 8.0]])
    assert np.allclose(invert(g, [[2.0, 8.0]]), [[2.0, 2.0]])


def test_parabola_radial_image_constraint():
    # (1, 0.5) has v < u^2, which no point of the orthant reaches
    g = parabola_radial()
    with pytest.raises(PointOutsideImage):
        invert(g, [[1.0, 0.5]])


def test_parabola_shear_preimage_outside_domain():
    g = parabola_shear()
    assert np.allclose(apply(g, [[0.5, 0.5]]), [[0.5, 0.75]])
    # candidate preimage (0.5, 1.05) exits the open unit square
    with pytest.raises(PointOutsideImage):
        invert(g, [[0.5, 1.3]])


def test_square_to_ball_values():
    g = square_to_ball()
    c = np.sqrt(0.5)
    assert np.allclose(apply(g, [[1.0, 0.0], [1.0, 1.0]]),
                       [[1.0, 0.0], [c, c]], atol=1e-15)
    assert np.allclose(invert(g, [[c, c]]), [[1.0, 1.0]], atol=1e-12)


def test_square_to_ball_origin():
    g = square_to_ball()
    assert np.allclose(apply(g, [[0.0, 0.0]]), [[0.0, 0.0]])
    assert np.allclose(invert(g, [[0.0, 0.0]]), [[0.0, 0.0]])


def test_square_to_ball_roundtrip_grid():
    g = square_to_ball()
    xs = np.linspace(-2.0, 2.0, 21)
    gx, gy = np.meshgrid(xs, xs)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    back = invert(g, apply(g, pts))
    assert np.abs(back - pts).max() < 1e-8


def test_tabulated_roundtrip_and_range():
    xs = np.linspace(0.0, 4.0, 33)
    g = tabulated(xs, np.sinh(xs), dim=1)
    pts = np.array([[0.5], [1.25], [3.9]])
    assert np.abs(invert(g, apply(g, pts)) - pts).max() < 1e-8
    with pytest.raises(PointOutsideImage):
        invert(g, [[np.sinh(4.0) + 1.0]])


def test_tabulated_decreasing_table():
    xs = np.linspace(0.0, 1.0, 17)
    g = tabulated(xs, -xs ** 3, dim=2)
    pts = np.array([[0.3, 0.8]])
    assert np.abs(invert(g, apply(g, pts)) - pts).max() < 1e-8


def test_tabulated_rejects_non_monotone():
    with pytest.raises(ValueError):
        tabulated([0.0, 1.0, 2.0], [0.0, 2.0, 1.0], dim=1)
    with pytest.raises(ValueError):
        tabulated([0.0, 0.0, 1.0], [0.0, 1.0, 2.0], dim=1)


def test_invert_clamp_slack_recovers_boundary_graze():
    g = coordinatewise_log(1)
    # a preimage a hair outside the open orthant is nudged back in
    q = apply(g, [[1e-12]])
    assert invert(g, q, clamp_slack=1e-11)[0, 0] > 0


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def test_generator_names_cover_registry():
    names = generator_names()
    assert "identity" in names and "tabulated" in names
    assert names == sorted(names)


def test_make_generator_passes_parameters():
    g = make_generator("coordinatewise_power", 2, p=3.0)
    assert np.allclose(apply(g, [[2.0, 1.0]]), [[8.0, 1.0]])


def test_make_generator_unknown_name():
    with pytest.raises(ValueError):
        make_generator("nope", 2)


def test_make_generator_missing_parameter():
    with pytest.raises(ValueError):
        make_generator("coordinatewise_power", 2)


def test_describe_is_json_friendly():
    g = make_generator("coordinatewise_power", 2, p=2.0)
    d = g.describe()
    assert d["name"] == "coordinatewise_power"
    assert d["dim"] == 2
    assert d["domain"] == "positive"
    assert d["params"] == {"p": 2.0}


# ---------------------------------------------------------------------------
# image convexity probe
# ---------------------------------------------------------------------------

def test_convex_image_holds_for_log():
    v = check_convex_image(coordinatewise_log(2))
    assert v.status == "holds-up-to-sampling"


def test_convex_image_fails_for_shear():
    v = check_convex_image(parabola_shear())
    assert v.failed
    assert v.witness["margin"] > 0
    # the recorded image midpoint really has no preimage in the square
    g = parabola_shear()
    with pytest.raises(PointOutsideImage):
        invert(g, np.asarray(v.witness["image_midpoint"]))


def test_convex_image_deterministic():
    v1 = check_convex_image(parabola_shear(), rng_seed=42)
    v2 = check_convex_image(parabola_shear(), rng_seed=42)
    assert v1.witness["margin"] == v2.witness["margin"]
    assert v1.witness["margin"] == pytest.approx(0.012425001350200082,
                                                 abs=1e-15)
