import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypersoliton import catalog
from hypersoliton import jets as J
from hypersoliton.errors import RankDeficient
from hypersoliton.extrinsic import (codazzi_max, codazzi_residual, extrinsic_data,
                                    gauss_equation_ricci, position_split, principal_clusters)
from hypersoliton.intrinsic import christoffel, curvature


@pytest.mark.parametrize("n, r", [(2, 1.0), (2, 2.0), (3, 0.7)])
def test_sphere_is_totally_umbilic(n, r):
    spec = catalog.build("hypersphere", {"n": n, "r": r})
    e = extrinsic_data(spec, [0.2] * n)
    assert np.allclose(e.kappas, -1 / r)
    assert np.isclose(e.rho, r)
    assert np.allclose(e.xT, 0.0, atol=1e-12)
    assert e.reconstruction_error() < 1e-12


def test_circular_cylinder_curvatures():
    spec = catalog.build("circular-hypercylinder", {"n": 2, "r": 2.0})
    e = extrinsic_data(spec, [0.0, 1.0])
    assert np.allclose(np.sort(e.kappas), [-0.5, 0.0])
    assert np.isclose(e.rho, 2.0)
    assert np.allclose(e.tangential_position(), [0.0, 0.0, 1.0])


def graph_spec():
    def ev(x):
        return [x[0], x[1], J.sin(x[0]) * J.cos(x[1]) + x[0] * x[1]]
    return J.MapSpec(2, 3, ev, ((-1.0, 1.0), (-1.0, 1.0)), "graph")


def test_graph_second_fundamental_form_oracle():
    # for z = u(x, y): h_ij = u_ij / sqrt(1 + |grad u|^2) with the upward normal
    x, y = 0.3, -0.2
    e = extrinsic_data(graph_spec(), [x, y])
    ux = math.cos(x) * math.cos(y) + y
    uy = -math.sin(x) * math.sin(y) + x
    hess = np.array([[-math.sin(x) * math.cos(y), -math.cos(x) * math.sin(y) + 1],
                     [-math.cos(x) * math.sin(y) + 1, -math.sin(x) * math.cos(y)]])
    w = math.sqrt(1 + ux * ux + uy * uy)
    sign = np.sign(e.normal[2])
    assert np.allclose(e.h, sign * hess / w)
    assert np.allclose(e.metric.g, np.eye(2) + np.outer([ux, uy], [ux, uy]))


def test_gauss_and_codazzi_on_graph():
    spec = graph_spec()
    e = extrinsic_data(spec, [0.1, 0.4])
    ric = curvature(e.metric, christoffel(e.metric)).ricci
    assert np.allclose(ric, gauss_equation_ricci(e), atol=1e-12)
    assert codazzi_max(e) < 1e-12
    assert codazzi_residual(spec, [0.1, 0.4], 0, 1, 1) < 1e-12


def test_rank_deficient_map():
    spec = J.MapSpec(2, 3, lambda x: [x[0], x[0], 0 * x[1]], ((-1, 1), (-1, 1)), "fold")
    with pytest.raises(RankDeficient):
        extrinsic_data(spec, [0.1, 0.2])


def test_orientation_flips_curvatures_and_support():
    spec = catalog.build("hypersphere", {"n": 2})
    a = extrinsic_data(spec, [0.1, 0.2])
    b = extrinsic_data(spec, [0.1, 0.2], orientation=-1)
    assert np.allclose(a.kappas, -b.kappas[::-1])
    assert np.isclose(a.rho, -b.rho)
    assert np.allclose(a.rho * a.h, b.rho * b.h)


def test_position_split():
    spec = catalog.build("cone-flat", {})
    xT, rho = position_split(spec, [0.5, 0.3])
    assert abs(rho) < 1e-12
    e = extrinsic_data(spec, [0.5, 0.3])
    assert np.allclose(e.tangent @ xT, e.position)


def test_principal_clusters():
    assert principal_clusters(np.array([1.0, 1.0 + 1e-9, 0.0])) == [(0.0, 1), (1.0 + 5e-10, 2)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([2, 3]))
def test_gauss_equation_on_random_graphs(seed, n):
    spec = catalog.random_graph(n, seed)
    for pt in catalog.random_points(spec, 3, seed):
        e = extrinsic_data(spec, pt)
        ric = curvature(e.metric, christoffel(e.metric)).ricci
        assert np.allclose(ric, gauss_equation_ricci(e), atol=1e-9)
        assert codazzi_max(e) < 1e-9
