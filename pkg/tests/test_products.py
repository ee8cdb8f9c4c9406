import math

import numpy as np
import pytest

from hypersoliton import jets as J
from hypersoliton import products as P
from hypersoliton.errors import BadParameter, InconclusiveClassification, NonPositiveScaling

FLAT = P.flat_metric(1)
BOX = ((-1.0, 1.0), (-1.0, 1.0))


def plane(f1=P._one, f2=P._one, domain=BOX):
    return P.ProductSpec(1, 1, FLAT, FLAT, f1, f2, domain=domain)


GRID = [np.array(p) for p in [(0.2, 0.3), (-0.4, 0.5), (0.6, -0.7), (-0.1, -0.2)]]


def test_direct_product_metric():
    m = P.build_product_metric(plane(), [0.1, 0.2])
    assert np.array_equal(m.g, np.eye(2))


def test_warped_plane_metric_and_block_orthogonality():
    m = P.build_product_metric(plane(f2=lambda x: J.exp(x[0])), [0.3, 0.1])
    assert np.allclose(m.g, np.diag([1.0, math.exp(0.6)]))
    assert m.g[0, 1] == 0.0 and m.g[1, 0] == 0.0
    assert np.all(m.dg[:, 0, 1] == 0.0)


def test_stereographic_blocks_match_closed_form():
    # F = 1, G(u): g = U^2 du^2 + G^2 V^2 dv^2
    G = lambda x: 2 + 0.5 * J.sin(x[0]) * J.cos(x[1])
    spec = P.ProductSpec(2, 2, P.isothermal_sphere_metric(2), P.isothermal_sphere_metric(2),
                         f2=G)
    pt = np.array([0.3, -0.2, 0.5, 0.1])
    m = P.build_product_metric(spec, pt)
    U = 2 / (1 + pt[0] ** 2 + pt[1] ** 2)
    V = 2 / (1 + pt[2] ** 2 + pt[3] ** 2)
    g = 2 + 0.5 * math.sin(pt[0]) * math.cos(pt[1])
    assert np.allclose(m.g, np.diag([U * U, U * U, g * g * V * V, g * g * V * V]), atol=1e-10)


def test_non_positive_scaling():
    with pytest.raises(NonPositiveScaling):
        P.build_product_metric(plane(f2=lambda x: x[0]), [-0.2, 0.1])


def test_totally_geodesic_leaves():
    f = P.leaf_analysis(plane(), [0.1, 0.2], 2)
    assert np.allclose(f.leaf_h, 0.0)
    assert f.geodesic_residual == 0.0


def test_warped_plane_leaf_form():
    # du^2 + e^{2u} dv^2 at u = 0: h(d_v, d_v) = Gamma^u_vv d_u = -1 d_u
    f = P.leaf_analysis(plane(f2=lambda x: J.exp(x[0])), [0.0, 0.4], 2)
    assert np.isclose(f.leaf_h[0, 0, 0], -1.0)
    assert f.expected_residual < 1e-12
    assert f.H_parallel_residual < 1e-12


def test_twisted_leaf_mean_curvature_not_parallel():
    f = P.leaf_analysis(plane(f2=lambda x: J.exp(x[0] * x[1])), [0.3, 0.4], 2)
    assert f.H_parallel_residual > 0.5
    assert f.umbilic_residual < 1e-12


def test_classify_direct():
    assert P.classify_product(plane(), GRID) == "direct"


def test_classify_polar_plane_as_warped():
    spec = plane(f2=lambda x: x[0], domain=((0.05, 2.0), (-3.0, 3.0)))
    grid = [np.array(p) for p in [(0.5, 0.1), (1.2, -1.0), (1.8, 2.0)]]
    assert P.classify_product(spec, grid) == "warped"


def test_separable_exponential_is_warped():
    # e^{u+v} = e^u e^v; the e^v factor is absorbed into dv, so this is warped
    assert P.classify_product(plane(f2=lambda x: J.exp(x[0] + x[1])), GRID) == "warped"


def test_coupled_exponential_is_twisted():
    assert P.classify_product(plane(f2=lambda x: J.exp(x[0] * x[1])), GRID) == "twisted"


def test_near_threshold_is_inconclusive():
    spec = plane(f2=lambda x: J.exp(1e-6 * x[0] * x[1]))
    with pytest.raises(InconclusiveClassification):
        P.classify_product(spec, GRID)


@pytest.mark.parametrize("kind", P.PRODUCT_KINDS)
def test_round_trip_classification(kind):
    for seed in range(10):
        spec = P.random_product(kind, seed)
        assert P.classify_product(spec, P.product_grid(spec, seed=seed)) == kind


def test_unknown_product_kind():
    with pytest.raises(BadParameter):
        P.random_product("skew", 0)


@pytest.mark.parametrize("fid", P.FIXTURE_IDS)
@pytest.mark.parametrize("n", [3, 4])
def test_connection_fixtures(fid, n):
    assert P.fixture_connection_tables(fid, n=n) <= 1e-8


def test_unknown_fixture():
    with pytest.raises(BadParameter):
        P.fixture_connection_tables("(9.99)")


def test_warped_fixture_example_point():
    # P = 1, f = s: Gamma^y_{s y} = f'/f = 1/2 at s = 2
    spec = P._warped_s_spec(3, lambda x: 1.0, lambda s: s, ((0.1, 3.0),) + P.sphere_domain(2), "w")
    g = P._numeric_gamma(spec, [2.0, 0.1, 0.2])
    assert np.isclose(g[1, 0, 1], 0.5) and np.isclose(g[2, 0, 2], 0.5)


def test_twisted_fixture_example_point():
    # P = 2 + sin y2, f = s at (1, 0): Gamma^s_{s y2} = 1/2, Gamma^{y2}_{s y2} = 1
    spec = P._warped_s_spec(3, lambda x: 2 + J.sin(x[1]), lambda s: s,
                            ((0.1, 3.0),) + P.sphere_domain(2), "t")
    g = P._numeric_gamma(spec, [1.0, 0.0, 0.3])
    assert np.isclose(g[0, 0, 1], 0.5) and np.isclose(g[1, 0, 1], 1.0)


@pytest.mark.parametrize("n", [3, 4])
def test_sectional_fixtures(n):
    assert P.sectional_658(n) <= 1e-8
    assert P.sectional_676(n) <= 1e-8
    assert P.principal_677(n) <= 1e-8


def test_immersion_metric_and_ricci():
    out = P.immersion_684(3)
    assert out["metric_max_err"] <= 1e-8
    assert math.isclose(out["ricci_y2y2_origin"], 4 / 3, abs_tol=1e-8)


def test_immersion_ricci_grows_with_dimension():
    out = P.immersion_684(4)
    assert math.isclose(out["ricci_y2y2_origin"], out["ricci_y2y2_closed"], abs_tol=1e-8)
    assert math.isclose(out["ricci_y2y2_closed"], 2 + 1 / 3)


def test_warped_sphere_sectional_curvatures():
    G = lambda x: 2 + 0.3 * J.sin(x[0])
    Kuu, Kvv, gauss_form, printed = P.warped_sphere_sectional(2, 2, G, [0.3, 0.2, 0.1, 0.4])
    assert math.isclose(Kuu, 1.0, abs_tol=1e-10)
    assert math.isclose(Kvv, gauss_form, abs_tol=1e-10)
    assert Kvv < 1


def test_g_family_sin_member():
    fam = P.GFamily(1, (0.0, 1.0))
    grid = [np.array([x]) for x in np.linspace(-1.4, 1.4, 9)]
    res = P.g_family_probe(fam, grid)
    assert res.hessian_residual < 1e-12
    assert math.isclose(res.eikonal_min, min(math.cos(p[0]) ** 2 for p in grid))


def test_g_family_constant_member():
    res = P.g_family_probe(P.GFamily(1, (1.0, 0.0)))
    assert res.hessian_residual < 1e-12
    assert math.isclose(res.eikonal_min, 1.0) and math.isclose(res.eikonal_max, 1.0)


def test_g_family_eikonal_oracle_p2():
    # residual = c1^2 + c2^2 - G^2 for every member
    fam = P.GFamily(2, (0.3, 0.5, 0.8))
    pt = np.array([0.4, -0.9])
    g = 0.3 + 0.5 * math.sin(pt[0]) + 0.8 * math.cos(pt[0]) * math.cos(pt[1])
    res = P.g_family_probe(fam, [pt])
    assert math.isclose(res.eikonal_min, abs(0.25 + 0.64 - g * g), abs_tol=1e-12)
    assert res.hessian_residual < 1e-12 and res.coordinate_offdiag_residual < 1e-12


def test_g_family_rejects_bad_coefficients():
    with pytest.raises(BadParameter):
        P.GFamily(2, (0.0, 0.0, 0.0))
    with pytest.raises(BadParameter):
        P.GFamily(2, (1.0, 0.0))


def test_random_unit_tuples_are_unit_and_seeded():
    a = P.random_unit_tuples(2, 5, 3)
    assert a == P.random_unit_tuples(2, 5, 3)
    assert np.allclose([np.linalg.norm(t) for t in a], 1.0)


def test_fixture_table_rows():
    rows = P.fixture_table()
    ids = [r["id"] for r in rows]
    for fid in ("(6.37)", "(6.58)", "(6.35)-probe"):
        assert fid in ids
    assert all(r["pass"] for r in rows if r["pass"] is not None)
