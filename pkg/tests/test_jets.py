import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypersoliton import jets as J
from hypersoliton.errors import DomainViolation


def test_sin_times_exp_matches_closed_form():
    x0, y0 = 0.3, -0.4
    f = J.lift_scalar(lambda v: J.sin(v[0]) * J.exp(v[1]), [x0, y0])
    s, c, e = math.sin(x0), math.cos(x0), math.exp(y0)
    assert np.allclose(f.value, [s * e])
    assert np.allclose(f.d1[0], [c * e, s * e])
    assert np.allclose(f.d2[0], [[-s * e, c * e], [c * e, s * e]])
    d3 = f.d3[0]
    assert np.isclose(d3[0, 0, 0], -c * e)
    assert np.isclose(d3[0, 0, 1], -s * e)
    assert np.isclose(d3[0, 1, 1], c * e)
    assert np.isclose(d3[1, 1, 1], s * e)


def test_third_derivative_is_symmetric():
    f = J.lift_scalar(lambda v: J.exp(v[0] * v[1]) * J.cos(v[2] + v[0]) / (2 + v[1] * v[1]),
                      [0.2, 0.5, -0.3])
    d3 = f.d3[0]
    for perm in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]:
        assert np.array_equal(d3, np.transpose(d3, perm))


def test_power_and_division():
    f = J.lift_scalar(lambda v: v[0] ** 3 / (1 + v[0]), [0.5])
    # (x^3/(1+x))' = (2x^3 + 3x^2) / (1+x)^2
    x = 0.5
    assert np.isclose(f.d1[0, 0], (2 * x ** 3 + 3 * x ** 2) / (1 + x) ** 2)


@pytest.mark.parametrize("fn, x", [(J.sqrt, -1.0), (J.log, 0.0), (J.tan, math.pi / 2)])
def test_guarded_functions_raise(fn, x):
    with pytest.raises(DomainViolation):
        J.lift_scalar(lambda v: fn(v[0]), [x])


def test_reciprocal_near_zero_raises():
    with pytest.raises(DomainViolation):
        J.lift_scalar(lambda v: 1.0 / (v[0] - 0.25), [0.25])


def test_float_path_matches_jet_value():
    g = lambda v: J.sqrt(1 + v[0] ** 2) * J.tan(v[1])
    f = J.lift_scalar(g, [0.4, 0.3])
    assert np.isclose(f.value[0], g([0.4, 0.3]))


def test_antiderivative_of_cosine():
    f = J.lift_scalar(lambda v: J.antiderivative(_Cos(), v[0]), [0.7])
    assert np.isclose(f.value[0], math.sin(0.7), atol=1e-12)
    assert np.isclose(f.d1[0, 0], math.cos(0.7))
    assert np.isclose(f.d2[0, 0, 0], -math.sin(0.7))
    assert np.isclose(f.d3[0, 0, 0, 0], -math.cos(0.7))


class _Cos:
    def __call__(self, t):
        return J.cos(t)

    def __hash__(self):
        return 1

    def __eq__(self, other):
        return isinstance(other, _Cos)


def test_mapspec_check_is_strict():
    spec = J.MapSpec(1, 2, lambda x: [x[0], x[0] ** 2], ((0.0, 1.0),), "parabola")
    spec.check([0.5])
    for bad in ([0.0], [1.0], [1.5]):
        with pytest.raises(DomainViolation):
            spec.check(bad)


def test_fd_crosscheck_on_sphere():
    def ev(x):
        return [J.cos(x[0]) * J.cos(x[1]), J.cos(x[0]) * J.sin(x[1]), J.sin(x[0])]
    spec = J.MapSpec(2, 3, ev, ((-1.4, 1.4), (-3.0, 3.0)), "S2")
    errs = J.fd_crosscheck(spec, [0.2, 0.4])
    assert errs[1] < 1e-9 and errs[2] < 1e-8 and errs[3] < 1e-6


def test_fd_crosscheck_stencil_outside_domain():
    spec = J.MapSpec(1, 2, lambda x: [x[0], x[0]], ((0.0, 1.0),), "line")
    with pytest.raises(DomainViolation):
        J.fd_crosscheck(spec, [0.001])


def test_reparametrize_chains_derivatives():
    spec = J.MapSpec(1, 2, lambda x: [x[0], x[0] ** 2], ((-2.0, 2.0),), "parabola")
    rep = J.reparametrize(spec, lambda t: [t[0] + 0.2 * t[0] ** 3], ((-1.0, 1.0),))
    t = 0.5
    jet = J.lift_immersion(rep, [t])
    x, dx = t + 0.2 * t ** 3, 1 + 0.6 * t ** 2
    assert np.allclose(jet.value, [x, x * x])
    assert np.allclose(jet.d1[:, 0], [dx, 2 * x * dx])


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 5.0), st.floats(-2.0, 2.0))
def test_exp_log_roundtrip(x, y):
    f = J.lift_scalar(lambda v: J.exp(J.log(v[0])) + 0 * v[1], [x, y])
    assert np.isclose(f.value[0], x)
    assert np.allclose(f.d1[0], [1.0, 0.0])
    assert np.allclose(f.d2, 0.0, atol=1e-9)
    assert np.allclose(f.d3, 0.0, atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=3, max_size=3))
def test_sin_squared_plus_cos_squared(p):
    f = J.lift_scalar(lambda v: J.sin(v[0] * v[1] + v[2]) ** 2 + J.cos(v[0] * v[1] + v[2]) ** 2, p)
    assert np.isclose(f.value[0], 1.0)
    assert np.allclose(f.d1, 0.0, atol=1e-12)
    assert np.allclose(f.d2, 0.0, atol=1e-12)
    assert np.allclose(f.d3, 0.0, atol=1e-11)
