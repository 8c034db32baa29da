import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cloudprint.geometry import (ORDERS, RstParams, apply_rst, multiplane_rotation, parse_order,
                                 planar_rotation, random_rotation, random_rotation_in_plane,
                                 random_unit_direction, rotate, scale, translate)

ROT90 = np.array([[0.0, -1.0], [1.0, 0.0]])


def test_rotate_180_in_2d_negates():
    R = random_rotation_in_plane(2, 180.0, seed=1)
    np.testing.assert_allclose(rotate([[1.0, 0.0]], R), [[-1.0, 0.0]], atol=1e-15)


def test_rotate_identity_is_exact(victim):
    assert np.array_equal(rotate(victim, np.eye(16)), victim)


def test_rotate_90_in_e1_e2_plane():
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    R = planar_rotation(e2, e1, 90.0)
    # oracle: explicit matrix product with the textbook 90 degree rotation
    expected = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]], float) @ np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(expected, [-2.0, 1.0, 3.0])
    np.testing.assert_allclose(rotate([[1.0, 2.0, 3.0]], R)[0], expected, atol=1e-15)


def test_rotate_dimension_mismatch():
    with pytest.raises(ValueError):
        rotate(np.ones((3, 2)), np.eye(3))


def test_rotate_rejects_reflection():
    with pytest.raises(ValueError, match="determinant"):
        rotate(np.ones((3, 2)), np.diag([1.0, -1.0]))


def test_scale_examples():
    np.testing.assert_array_equal(scale([[1.0, 1.0]], 2.0), [[2.0, 2.0]])
    X = np.array([[0.3, -0.4], [1.0, 2.0]])
    assert np.array_equal(scale(X, 1.0), X)
    U = X / np.linalg.norm(X, axis=1, keepdims=True)
    np.testing.assert_allclose(np.linalg.norm(scale(U, 0.5), axis=1), 0.5)


@pytest.mark.parametrize("alpha", [0.0, -1.0, np.inf, np.nan])
def test_scale_rejects_bad_factor(alpha):
    with pytest.raises(ValueError):
        scale([[1.0, 1.0]], alpha)


def test_translate_examples():
    np.testing.assert_array_equal(translate([[1.0, 0.0]], [0.0, 1.0]), [[1.0, 1.0]])
    X = np.array([[0.0, 0.0], [3.0, 4.0]])
    assert np.array_equal(translate(X, [0.0, 0.0]), X)
    Y = translate(X, [-7.5, 2.25])
    assert np.linalg.norm(Y[0] - Y[1]) == pytest.approx(5.0, abs=1e-12)
    with pytest.raises(ValueError):
        translate(X, [1.0, 2.0, 3.0])


def test_apply_rst_identity(victim):
    np.testing.assert_array_equal(apply_rst(victim, RstParams.identity(16)), victim)


def test_apply_rst_orders_hand_composed():
    params = RstParams(ROT90, 2.0, np.array([1.0, 1.0]), "R-S-T")
    # R: (1,0)->(0,1); S: ->(0,2); T: ->(1,3)
    np.testing.assert_allclose(apply_rst([[1.0, 0.0]], params), [[1.0, 3.0]], atol=1e-15)
    params = RstParams(ROT90, 2.0, np.array([1.0, 1.0]), "T-S-R")
    # T: (1,0)->(2,1); S: ->(4,2); R: ->(-2,4)
    np.testing.assert_allclose(apply_rst([[1.0, 0.0]], params), [[-2.0, 4.0]], atol=1e-15)


def test_parse_order():
    assert parse_order("r-s-t") == "RST"
    assert parse_order(("T", "S", "R")) == "TSR"
    assert len(set(ORDERS)) == 6
    with pytest.raises(ValueError):
        parse_order("RRT")


def test_random_rotation_in_plane_zero_is_identity():
    assert np.array_equal(random_rotation_in_plane(5, 0.0, seed=2), np.eye(5))


def test_random_rotation_in_plane_2d_180_is_minus_identity():
    np.testing.assert_allclose(random_rotation_in_plane(2, 180.0, seed=9), -np.eye(2), atol=1e-15)


def test_random_rotation_in_plane_high_dim_is_proper():
    R = random_rotation_in_plane(128, 60.0, seed=4)
    assert np.abs(R.T @ R - np.eye(128)).max() <= 1e-9
    assert abs(np.linalg.det(R) - 1.0) <= 1e-9
    # rotates by 60 degrees in exactly one plane: eigenvalues e^{+-i60}, rest 1
    assert np.trace(R) == pytest.approx(126 + 2 * np.cos(np.pi / 3), abs=1e-12)


def test_random_rotation_in_plane_is_deterministic():
    assert np.array_equal(random_rotation_in_plane(10, 33.0, 5), random_rotation_in_plane(10, 33.0, 5))


def test_random_rotation_in_plane_errors():
    with pytest.raises(ValueError):
        random_rotation_in_plane(1, 10.0)
    with pytest.raises(ValueError):
        random_rotation_in_plane(3, 181.0)


@pytest.mark.parametrize("n", [2, 3, 17, 64])
def test_haar_rotation_is_proper(n):
    R = random_rotation(n, seed=n)
    assert np.abs(R.T @ R - np.eye(n)).max() <= 1e-9
    assert abs(np.linalg.det(R) - 1.0) <= 1e-9


def test_multiplane_180_even_dim_negates():
    np.testing.assert_allclose(multiplane_rotation(8, 180.0, seed=0), -np.eye(8), atol=1e-12)


def test_random_unit_direction():
    assert random_unit_direction(1, seed=0)[0] in (1.0, -1.0)
    for seed in range(20):
        assert np.linalg.norm(random_unit_direction(50, seed)) == pytest.approx(1.0, abs=1e-12)
    vecs = np.array([random_unit_direction(8, s) for s in range(100)])
    gram = vecs @ vecs.T - np.eye(100)
    assert np.abs(gram).max() < 1.0 - 1e-6  # no two seeds give the same direction


clouds = st.integers(0, 2**32 - 1).flatmap(
    lambda seed: st.sampled_from([2, 3, 16]).map(
        lambda n: np.random.default_rng(seed).uniform(-5, 5, size=(6, n))))


@settings(max_examples=60, deadline=None)
@given(X=clouds, deg=st.floats(-180, 180), seed=st.integers(0, 10**6))
def test_rotation_preserves_norms_angles_distances(X, deg, seed):
    n = X.shape[1]
    Y = rotate(X, random_rotation_in_plane(n, deg, seed))
    np.testing.assert_allclose(np.linalg.norm(Y, axis=1), np.linalg.norm(X, axis=1), atol=1e-9)
    p, q = X[0], X[1]
    cos = p @ q / (np.linalg.norm(p) * np.linalg.norm(q))
    cos2 = Y[0] @ Y[1] / (np.linalg.norm(Y[0]) * np.linalg.norm(Y[1]))
    assert cos2 == pytest.approx(cos, abs=1e-9)
    assert np.linalg.norm(Y[0] - Y[1]) == pytest.approx(np.linalg.norm(p - q), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(X=clouds, alpha=st.floats(0.1, 10))
def test_scaling_preserves_angles_and_distance_ratios(X, alpha):
    Y = scale(X, alpha)
    cos = lambda a, b: a @ b / (np.linalg.norm(a) * np.linalg.norm(b))
    assert cos(Y[0], Y[1]) == pytest.approx(cos(X[0], X[1]), abs=1e-9)
    ratio = np.linalg.norm(X[0] - X[1]) / np.linalg.norm(X[2] - X[3])
    ratio2 = np.linalg.norm(Y[0] - Y[1]) / np.linalg.norm(Y[2] - Y[3])
    assert ratio2 == pytest.approx(ratio, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(X=clouds, seed=st.integers(0, 10**6))
def test_translation_preserves_distances_and_relative_angles(X, seed):
    d = np.random.default_rng(seed).uniform(-10, 10, size=X.shape[1])
    Y = translate(X, d)
    assert np.linalg.norm(Y[0] - Y[1]) == pytest.approx(np.linalg.norm(X[0] - X[1]), abs=1e-9)
    # angle p-o-q with o the third row, before and after
    def angle_cos(P):
        a, b = P[0] - P[2], P[1] - P[2]
        return a @ b / (np.linalg.norm(a) * np.linalg.norm(b))
    assert angle_cos(Y) == pytest.approx(angle_cos(X), abs=1e-9)


def test_same_seed_bit_identical():
    a = RstParams(random_rotation_in_plane(6, 45.0, 11), 2.0, random_unit_direction(6, 11))
    b = RstParams(random_rotation_in_plane(6, 45.0, 11), 2.0, random_unit_direction(6, 11))
    X = np.arange(12.0).reshape(2, 6)
    assert apply_rst(X, a).tobytes() == apply_rst(X, b).tobytes()


def test_rst_params_dict_round_trip():
    p = RstParams(random_rotation(4, 1), 3.5, np.arange(4.0), "S-T-R")
    q = RstParams.from_dict(p.to_dict())
    assert np.array_equal(p.rotation, q.rotation) and p.scale == q.scale and q.order == "STR"


def test_cloud_validation_rejects_nan():
    with pytest.raises(ValueError):
        rotate([[np.nan, 1.0]], np.eye(2))
