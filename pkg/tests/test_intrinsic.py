import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypersoliton import jets as J
from hypersoliton.errors import DegeneratePlane, SingularMetric
from hypersoliton.intrinsic import (MetricData, ScalarFieldJet, bianchi_residual, christoffel,
                                    compatibility_residual, curvature, lie_derivative_metric,
                                    riemann_symmetry_residual, scalar_calculus, sectional,
                                    to_orthonormal)


def metric_at(components, point):
    """MetricData from a callable returning an n x n nested list of jets."""
    return MetricData.from_component_jets(components(J.variables(point)))


def round_sphere(r):
    def comps(x):
        c = J.cos(x[0])
        return [[r * r + 0 * x[0], 0.0], [0.0, r * r * c * c]]
    return comps


def half_plane(x):
    w = 1.0 / (x[1] * x[1])
    return [[w, 0.0], [0.0, w]]


def warped_plane(x):
    return [[1.0, 0.0], [0.0, J.exp(2 * x[0])]]


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_round_sphere_curvature(r):
    m = metric_at(round_sphere(r), [0.3, 1.0])
    cur = curvature(m, christoffel(m))
    assert np.isclose(sectional(m, cur, 0, 1), 1 / r ** 2)
    assert np.allclose(cur.ricci, m.g / r ** 2)
    assert np.isclose(cur.scalar, 2 / r ** 2)


def test_hyperbolic_half_plane():
    m = metric_at(half_plane, [0.4, 1.7])
    cur = curvature(m, christoffel(m))
    assert np.isclose(sectional(m, cur, 0, 1), -1.0)


def test_warped_plane_christoffel_oracle():
    # g = du^2 + e^{2u} dv^2: Gamma^u_vv = -e^{2u}, Gamma^v_uv = 1
    m = metric_at(warped_plane, [0.0, 0.3])
    c = christoffel(m)
    assert np.isclose(c.gamma[0, 1, 1], -1.0)
    assert np.isclose(c.gamma[1, 0, 1], 1.0)
    assert np.isclose(c.gamma[1, 1, 0], 1.0)
    cur = curvature(m, c)
    assert np.isclose(sectional(m, cur, 0, 1), -1.0)


def test_residual_checks_vanish_on_generic_metric():
    def comps(x):
        a = 2 + J.sin(x[0] * x[1])
        b = 0.3 * J.cos(x[2])
        c = 1.5 + x[0] * x[0]
        return [[a, b, 0.1 * x[1]], [b, c, 0.0], [0.1 * x[1], 0.0, J.exp(x[2])]]
    m = metric_at(comps, [0.2, -0.5, 0.4])
    c = christoffel(m)
    cur = curvature(m, c)
    assert compatibility_residual(m, c) < 1e-12
    assert bianchi_residual(cur, m.g) < 1e-12
    assert riemann_symmetry_residual(cur, m.g) < 1e-12


def test_degenerate_plane():
    m = metric_at(round_sphere(1.0), [0.3, 1.0])
    cur = curvature(m, christoffel(m))
    with pytest.raises(DegeneratePlane):
        sectional(m, cur, 1, 1)


def test_singular_metric_raises():
    m = MetricData(np.array([[1.0, 1.0], [1.0, 1.0]]), np.zeros((2, 2, 2)), np.zeros((2, 2, 2, 2)))
    with pytest.raises(SingularMetric):
        m.inverse()


def test_killing_field_has_zero_lie_derivative():
    # rotation field (-y, x) on the flat plane
    m = MetricData(np.eye(2), np.zeros((2, 2, 2)), np.zeros((2, 2, 2, 2)))
    x, y = 0.3, -0.7
    V = np.array([-y, x])
    dV = np.array([[0.0, 1.0], [-1.0, 0.0]])  # dV[i, k] = d_i V^k
    assert np.allclose(lie_derivative_metric(m, V, dV), 0.0)


def test_position_field_on_flat_plane_is_homothetic():
    m = MetricData(np.eye(2), np.zeros((2, 2, 2)), np.zeros((2, 2, 2, 2)))
    assert np.allclose(lie_derivative_metric(m, np.array([0.2, 0.5]), np.eye(2)), 2 * np.eye(2))


def test_hessian_of_height_function_on_sphere():
    # height sin(lat) on the unit sphere has Hess = -sin(lat) g
    p = [0.4, 0.9]
    m = metric_at(round_sphere(1.0), p)
    c = christoffel(m)
    f = ScalarFieldJet.from_jet(J.lift_scalar(lambda x: J.sin(x[0]), p))
    grad, hess = scalar_calculus(m, c, f)
    assert np.allclose(hess, -math.sin(p[0]) * m.g)
    assert np.allclose(grad, [math.cos(p[0]), 0.0])


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.2, 1.2), st.floats(-3.0, 3.0), st.floats(0.2, 3.0))
def test_orthonormal_frame_of_metric_is_identity(lat, lon, r):
    m = metric_at(round_sphere(r), [lat, lon])
    assert np.allclose(to_orthonormal(m.g, m.g), np.eye(2))
