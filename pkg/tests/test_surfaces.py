import math

import numpy as np
import pytest

from mtsurf.catalog import fixture_classical, fixture_sigma_theta
from mtsurf.errors import DomainError, InvalidDataError
from mtsurf.fields import (
    Analytic,
    ComplexField,
    Grid2D,
    RealField,
    lincomb_real,
    sup_abs,
)
from mtsurf.lorentz import rotation
from mtsurf.surfaces import (
    SurfacePatch,
    liu_decompose,
    mean_curvature,
    patch_from_chart,
    patch_from_samples,
    quadric_residual,
    represent_first,
    represent_second,
    represent_third,
    verify_congruence,
)
from mtsurf.tolerances import fd_cap
from mtsurf.weierstrass import (
    WeierstrassFirst,
    deform_elliptic,
    deform_hyperbolic,
    deform_parabolic,
    second_to_first,
)

INVARIANT_KEYS = {"conformality", "conformal_min", "mean_null", "gauss_tangency",
                  "gauss_null", "metric_agreement", "loop_residual",
                  "coordinate_identity"}


def grid33(bounds=(-2.0, 2.0, -2.0, 2.0)):
    return Grid2D(bounds[0], bounds[1], bounds[2], bounds[3], 33, 33)


def z0(u, v):
    return 0.0 * (np.asarray(u) + np.asarray(v))


def real_u(g):
    return RealField.sample(g, Analytic(
        value=lambda u, v: np.asarray(u) + 0.0 * np.asarray(v),
        du=lambda u, v: 1.0 + z0(u, v), dv=z0, lap=z0))


def real_zero(g):
    return RealField.sample(g, Analytic(value=z0, du=z0, dv=z0, lap=z0))


def plane_first(g):
    gauss = ComplexField.sample(g, Analytic(
        value=lambda u, v: 1.0 + z0(u, v) + 0j,
        dz=lambda u, v: z0(u, v) + 0j,
        dzbar=lambda u, v: z0(u, v) + 0j))
    return WeierstrassFirst(gauss, real_u(g), real_zero(g))


def mean_centered(patch):
    x = patch.x_stack
    return x - x.mean(axis=(1, 2))[:, None, None]


# ---------------------------------------------------------------------------
# representation routes


def test_plane_patch_frozen():
    g = Grid2D(-1.0, 1.0, -1.0, 1.0, 17, 17)
    patch = represent_first(plane_first(g))
    U, V = g.mesh()
    np.testing.assert_allclose(patch.X[0].values, U + 1.0, atol=1e-14)
    np.testing.assert_allclose(patch.X[1].values, -(V + 1.0), atol=1e-14)
    np.testing.assert_allclose(patch.X[2].values, U + 1.0, atol=1e-14)
    np.testing.assert_allclose(patch.X[3].values, U + 1.0, atol=1e-14)
    assert sup_abs(patch.h_stack) == 0.0
    assert patch.invariants["conformality"] < 1e-15
    assert patch.invariants["conformal_min"] > 0.0


def test_represent_second_matches_chart():
    fx = fixture_sigma_theta(math.pi / 8, grid=grid33())
    patch = represent_second(fx.data, anchor=fx.expected["anchor"])
    chart = np.stack([c.values for c in fx.chart])
    assert sup_abs(patch.x_stack - chart) < 1e-8
    inv = patch.invariants
    assert set(inv) == INVARIANT_KEYS
    assert inv["conformality"] < 1e-10
    assert inv["metric_agreement"] < 1e-10
    assert inv["mean_null"] < 1e-12
    assert inv["gauss_tangency"] < 1e-10
    assert inv["gauss_null"] < 1e-10
    assert inv["coordinate_identity"] < 1e-10
    assert inv["loop_residual"] < 1e-8
    assert inv["conformal_min"] > 0.0
    assert patch.provenance["representation"] == "second"


def test_three_routes_agree():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    p2 = represent_second(fx.data)
    d1 = second_to_first(fx.data)
    p1 = represent_first(d1)
    assert sup_abs(mean_centered(p1) - mean_centered(p2)) < 1e-8

    coord3 = lincomb_real([(1.0, d1.pot1), (-1.0, d1.pot2)])
    coord4 = lincomb_real([(1.0, d1.pot1), (1.0, d1.pot2)])
    p3 = represent_third(d1.gauss, coord3, coord4)
    assert sup_abs(mean_centered(p3) - mean_centered(p1)) < 1e-8
    assert p3.provenance["representation"] == "third"


def test_represent_rejects_invalid_data():
    g = Grid2D(-1.0, 1.0, -1.0, 1.0, 17, 17)
    gauss = ComplexField.sample(g, Analytic(
        value=lambda u, v: np.asarray(u) + 1j * np.asarray(v),
        dz=lambda u, v: 1.0 + z0(u, v) + 0j,
        dzbar=lambda u, v: z0(u, v) + 0j))
    bad = WeierstrassFirst(gauss, real_u(g), real_zero(g))
    with pytest.raises(InvalidDataError):
        represent_first(bad)
    with pytest.raises(InvalidDataError):
        represent_third(gauss, real_u(g), real_zero(g))


def test_third_route_minimal_reduction():
    # gauss = e^z, coord3 = u, coord4 = 0: a minimal catenoid patch inside
    # the Euclidean slice x4 = const with factor cosh^2 u
    g = grid33((-1.0, 1.0, -1.0, 1.0))
    gauss = ComplexField.sample(g, Analytic(
        value=lambda u, v: np.exp(u) * np.exp(1j * np.asarray(v)),
        dz=lambda u, v: np.exp(u) * np.exp(1j * np.asarray(v)),
        dzbar=lambda u, v: z0(u, v) + 0j))
    patch = represent_third(gauss, real_u(g), real_zero(g))
    U, _ = g.mesh()
    assert sup_abs(patch.X[3].values) == 0.0
    assert sup_abs(patch.h_stack) == 0.0
    np.testing.assert_allclose(patch.conformal_factor.values, np.cosh(U) ** 2,
                               atol=1e-12)
    assert patch.invariants["conformality"] < 1e-12


def test_third_route_maximal_reduction():
    # gauss = 2 e^z keeps |gauss| > 1; coord3 = 0, coord4 = u gives a
    # maximal patch inside the Lorentz slice x3 = const
    g = grid33((-0.5, 0.5, -0.5, 0.5))
    gauss = ComplexField.sample(g, Analytic(
        value=lambda u, v: 2.0 * np.exp(u) * np.exp(1j * np.asarray(v)),
        dz=lambda u, v: 2.0 * np.exp(u) * np.exp(1j * np.asarray(v)),
        dzbar=lambda u, v: z0(u, v) + 0j))
    patch = represent_third(gauss, real_zero(g), real_u(g))
    U, _ = g.mesh()
    mag = 2.0 * np.exp(U)
    assert sup_abs(patch.X[2].values) == 0.0
    assert sup_abs(patch.h_stack) == 0.0
    np.testing.assert_allclose(patch.conformal_factor.values,
                               (mag - 1.0 / mag) ** 2 / 4.0, atol=1e-12)


def test_anchor_lands_on_requested_point():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    anchor = (1.0, -2.0, 3.0, 0.5)
    patch = represent_second(fx.data, anchor=anchor)
    got = tuple(float(c.values[0, 0]) for c in patch.X)
    assert got == anchor
    default = represent_second(fx.data)
    assert tuple(float(c.values[0, 0]) for c in default.X) == (0.0,) * 4


def test_loop_certificate_rejects_nonintegrable_input():
    g = Grid2D(-1.0, 1.0, -1.0, 1.0, 17, 17)
    rng = np.random.default_rng(7)
    noise = RealField(g, 5.0 * rng.standard_normal(g.shape))
    data = WeierstrassFirst(ComplexField(g, np.ones(g.shape, complex)),
                            RealField(g, g.mesh()[0]), noise)
    with pytest.raises(ValueError) as err:
        represent_first(data, validate=False)
    assert "loop residual" in str(err.value)


# ---------------------------------------------------------------------------
# congruence with the deformation families


def test_parabolic_deformation_is_congruent():
    fx = fixture_sigma_theta(0.0, grid=grid33((-2.0, 2.0, -2.0, 0.0)))
    d1 = second_to_first(fx.data)
    lam = 0.5
    before = represent_first(d1)
    after = represent_first(deform_parabolic(d1, lam))
    report = verify_congruence(before, after, rotation("parabolic", lam))
    assert report["passed"]
    assert report["residual"] < 1e-6
    assert report["rotation_family"] == "parabolic"


def test_elliptic_deformation_is_congruent():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    tau = 0.8
    before = represent_second(fx.data)
    after = represent_second(deform_elliptic(fx.data, tau))
    report = verify_congruence(before, after, rotation("elliptic", tau))
    assert report["passed"]
    assert report["residual"] < 1e-6


def test_hyperbolic_deformation_is_congruent():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    d1 = second_to_first(fx.data)
    eta = 0.6
    before = represent_first(d1)
    after = represent_first(deform_hyperbolic(d1, eta))
    report = verify_congruence(before, after, rotation("hyperbolic", eta))
    assert report["passed"]
    assert report["residual"] < 1e-6


def test_congruence_identity_and_grid_guard():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    patch = represent_second(fx.data)
    report = verify_congruence(patch, patch, rotation("elliptic", 0.0))
    assert report["residual"] == 0.0
    assert report["translation"] == [0.0, 0.0, 0.0, 0.0]

    other = represent_second(fixture_sigma_theta(0.0, grid=Grid2D(
        -2.0, 2.0, -2.0, 2.0, 17, 17)).data)
    with pytest.raises(DomainError):
        verify_congruence(patch, other, rotation("elliptic", 0.0))


# ---------------------------------------------------------------------------
# chart route, samples route


def test_patch_from_chart_zero_mean_curvature():
    fx = fixture_classical("catenoid-r3", grid=grid33())
    patch = patch_from_chart(fx.chart)
    assert patch.invariants["conformality"] < 1e-12
    assert "metric_agreement" not in patch.invariants
    _, report = mean_curvature(patch)
    assert report["max_norm"] == 0.0
    assert sup_abs(patch.X[3].values) == 0.0
    U, _ = patch.grid.mesh()
    np.testing.assert_allclose(patch.conformal_factor.values, np.cosh(U) ** 2,
                               rtol=1e-12)


def test_patch_from_chart_rejects_nonspacelike():
    g = Grid2D(-1.0, 1.0, -1.0, 1.0, 17, 17)
    U, V = g.mesh()
    coords = (RealField(g, U), RealField(g, 0.0 * U),
              RealField(g, 0.0 * U), RealField(g, V))
    with pytest.raises(DomainError) as err:
        patch_from_chart(coords)
    assert "spacelike" in str(err.value)


def test_patch_from_samples_round_trip():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    chart = np.stack([c.values for c in fx.chart])
    patch = patch_from_samples(fx.grid, chart, provenance={"origin": "test"})
    np.testing.assert_array_equal(patch.x_stack, chart)
    assert patch.invariants["conformal_min"] > 0.0
    with pytest.raises(ValueError):
        patch_from_samples(fx.grid, chart[:3])


# ---------------------------------------------------------------------------
# mean curvature and quadric diagnostics


def test_mean_curvature_report_frozen():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    patch = represent_second(fx.data, anchor=fx.expected["anchor"])
    fields, report = mean_curvature(patch)
    U, V = fx.grid.mesh()
    closed = 2.0 * math.sqrt(2.0) * np.cosh(V) / np.cosh(U)
    norm = np.sqrt(sum(f.values ** 2 for f in fields))
    assert sup_abs(norm - closed) < 1e-10
    np.testing.assert_allclose(report["min_norm"],
                               2.0 * math.sqrt(2.0) / math.cosh(2.0), rtol=1e-12)
    np.testing.assert_allclose(report["max_norm"],
                               2.0 * math.sqrt(2.0) * math.cosh(2.0), rtol=1e-12)
    assert report["min_norm_location"] == (-2.0, 0.0)
    assert report["sup_null_residual"] < 1e-12
    assert report["min_norm"] > 0.1


def test_quadric_residual_theta_zero():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    patch = represent_second(fx.data, anchor=fx.expected["anchor"])
    res = quadric_residual(patch, -1.0)
    assert res.grid == fx.grid
    assert sup_abs(res.values) < 1e-10


# ---------------------------------------------------------------------------
# null-direction factorization


def test_liu_exact_route_on_represented_patch():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    patch = represent_second(fx.data)
    liu = liu_decompose(patch)
    res = liu.residuals
    assert res["condition1"] == 0.0
    assert res["condition2"] == 0.0
    assert res["condition3"] == 0.0
    assert res["condition4"] < 1e-8
    assert res["reconstruction"] < 1e-10
    assert res["masked_fraction"] == 0.0
    # the second factor recovers the generating holomorphic field
    assert sup_abs(liu.f2.values - fx.data.holo.values) < 1e-8
    assert liu.cutoff == 1e-6


def test_liu_fd_route_is_second_order():
    fx = fixture_sigma_theta(0.0, grid=grid33())
    patch = represent_second(fx.data)
    liu = liu_decompose(patch, use_fd=True)
    cap = fd_cap(fx.grid, 50.0)
    res = liu.residuals
    for name in ("condition1", "condition2", "condition3"):
        assert res[name] < cap
    # the product condition is a genuine truncation-limited residual here
    assert 1e-4 < res["condition4"] < cap


def test_liu_cutoff_guard():
    g = Grid2D(-1.0, 1.0, -1.0, 1.0, 17, 17)
    U, V = g.mesh()
    coords = (RealField(g, U), RealField(g, -V),
              RealField(g, 0.0 * U), RealField(g, 0.0 * U))
    patch = patch_from_chart(coords)
    with pytest.raises(ValueError) as err:
        liu_decompose(patch)
    assert "cutoff" in str(err.value)


def test_liu_plane_factors_are_constant():
    g = Grid2D(-1.0, 1.0, -1.0, 1.0, 17, 17)
    patch = represent_first(plane_first(g))
    liu = liu_decompose(patch)
    assert liu.mask.all()
    np.testing.assert_allclose(liu.scale.values, 0.5, atol=1e-15)
    np.testing.assert_allclose(liu.f1.values, 0.0, atol=1e-14)
    np.testing.assert_allclose(liu.f2.values, 1.0, atol=1e-14)
    assert liu.residuals["reconstruction"] < 1e-14
