import numpy as np
import pytest
from hypothesis import given, strategies as st

from mtsurf.lorentz import (
    METRIC_SIGNS,
    LorentzRotation,
    complex_bilinear,
    isometry_defect,
    minkowski_inner,
    rotation,
    rotation_elliptic,
    rotation_hyperbolic,
    rotation_parabolic,
)

FAMILIES = [rotation_parabolic, rotation_elliptic, rotation_hyperbolic]

params = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


def test_inner_signature():
    e1 = np.array([1.0, 0, 0, 0])
    e4 = np.array([0.0, 0, 0, 1])
    assert minkowski_inner(e1, e1) == 1.0
    assert minkowski_inner(e4, e4) == -1.0
    assert minkowski_inner(e1, e4) == 0.0
    # null direction used by the representations
    n = np.array([0.0, 0.0, 1.0, 1.0])
    assert minkowski_inner(n, n) == 0.0


def test_inner_broadcasts_over_trailing_axes():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(4, 5, 6))
    b = rng.normal(size=(4, 5, 6))
    got = minkowski_inner(a, b)
    expected = a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
    assert got.shape == (5, 6)
    np.testing.assert_allclose(got, expected, rtol=0, atol=0)


def test_bilinear_has_no_conjugation():
    v = np.array([1j, 0, 0, 0])
    assert complex_bilinear(v, v) == -1.0 + 0j
    w = np.array([1.0, 1j, 0, 0])
    # isotropic direction of the complexified form
    assert complex_bilinear(w, w) == 0.0 + 0j


def test_inner_rejects_wrong_leading_axis():
    with pytest.raises(ValueError):
        minkowski_inner(np.zeros(3), np.zeros(3))


@pytest.mark.parametrize("build", FAMILIES)
def test_zero_parameter_is_bitwise_identity(build):
    m = build(0.0).matrix
    assert m.tobytes() == np.eye(4).tobytes()


@pytest.mark.parametrize("build", FAMILIES)
@given(p=params)
def test_isometry_defect(build, p):
    assert isometry_defect(build(p)) < 1e-12


@pytest.mark.parametrize("build", FAMILIES)
@given(p=params, q=params)
def test_one_parameter_group_law(build, p, q):
    left = build(p).matrix @ build(q).matrix
    right = build(p + q).matrix
    assert np.max(np.abs(left - right)) < 1e-12


def test_parabolic_frozen_values():
    # hand-derived action of the parameter-1 null rotation
    r = rotation_parabolic(1.0)
    np.testing.assert_allclose(r.apply([0.0, 0, 0, 1]), [0.0, -1.0, -0.5, 1.5], atol=1e-15)
    np.testing.assert_allclose(r.apply([0.0, 1, 0, 0]), [0.0, 1.0, 1.0, -1.0], atol=1e-15)
    # x1 axis and the null direction (0,0,-1,1) are fixed
    np.testing.assert_allclose(r.apply([1.0, 0, 0, 0]), [1.0, 0, 0, 0], atol=0)
    np.testing.assert_allclose(r.apply([0.0, 0, -1, 1]), [0.0, 0, -1, 1], atol=1e-15)


def test_hyperbolic_frozen_values():
    r = rotation_hyperbolic(1.0)
    np.testing.assert_allclose(r.apply([0.0, 0, 1, 0]),
                               [0.0, 0.0, np.cosh(1.0), np.sinh(1.0)], atol=1e-15)


def test_elliptic_rotates_first_plane_only():
    r = rotation_elliptic(0.8)
    np.testing.assert_allclose(r.apply([1.0, 0, 0, 0]),
                               [np.cos(0.8), np.sin(0.8), 0, 0], atol=1e-15)
    np.testing.assert_allclose(r.apply([0.0, 0, 1, 0]), [0, 0, 1, 0], atol=0)


@pytest.mark.parametrize("build", FAMILIES)
@given(p=params)
def test_rotation_preserves_inner_product(build, p):
    rng = np.random.default_rng(0)
    a = rng.normal(size=4)
    b = rng.normal(size=4)
    r = build(p)
    before = minkowski_inner(a, b)
    after = minkowski_inner(r.apply(a), r.apply(b))
    assert abs(after - before) < 1e-12 * (1 + abs(before))


def test_apply_to_stacked_field():
    r = rotation_elliptic(0.3)
    x = np.random.default_rng(1).normal(size=(4, 3, 2))
    y = r.apply(x)
    assert y.shape == (4, 3, 2)
    np.testing.assert_allclose(y[:, 1, 1], r.matrix @ x[:, 1, 1], atol=1e-15)


def test_rotation_dispatch_and_provenance():
    r = rotation("hyperbolic", 0.6)
    assert r.family == "hyperbolic"
    assert r.parameter == 0.6
    with pytest.raises(ValueError):
        rotation("loxodromic", 1.0)


def test_matrix_is_immutable_row_major():
    r = rotation_parabolic(0.5)
    assert r.matrix.flags["C_CONTIGUOUS"]
    with pytest.raises(ValueError):
        r.matrix[0, 0] = 2.0


def test_metric_signs_frozen():
    np.testing.assert_array_equal(METRIC_SIGNS, [1.0, 1.0, 1.0, -1.0])
