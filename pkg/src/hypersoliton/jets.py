"""Truncated order-3 Taylor arithmetic ("jets") in several variables.

A :class:`Jet` carries the value of a scalar expression together with its
gradient, Hessian and third-derivative tensor at one chart point.  Arithmetic
and the elementary functions below propagate all four exactly (up to
roundoff), so curvature, which needs third derivatives of an immersion, never
sees truncation error.

Evaluators written against this module work on plain floats as well: the
elementary functions dispatch on their argument type.  That float path is what
:func:`fd_crosscheck` uses as its independent oracle.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .config import EPS_DOMAIN
from .errors import DomainViolation

__all__ = [
    "Jet", "Jet3", "MapSpec", "sin", "cos", "tan", "sqrt", "exp", "log",
    "antiderivative", "lift_scalar", "lift_immersion", "fd_crosscheck",
    "reparametrize", "variables",
]


@lru_cache(maxsize=None)
def _sorted_index3(n):
    idx = np.sort(np.indices((n, n, n)).reshape(3, -1), axis=0)
    return tuple(a.reshape(n, n, n) for a in idx)


def _mirror3(t):
    # canonical (sorted) entry copied to every permutation -> exact symmetry
    return t[_sorted_index3(t.shape[0])]


def _sym_outer(a2, u):
    """a2_ij u_k + a2_ik u_j + a2_jk u_i."""
    return (a2[:, :, None] * u[None, None, :]
            + a2[:, None, :] * u[None, :, None]
            + a2[None, :, :] * u[:, None, None])


class Jet:
    """Value and first three partial derivatives of a scalar at a point."""

    __slots__ = ("v", "d1", "d2", "d3")
    __array_priority__ = 1000

    def __init__(self, v, d1, d2, d3):
        self.v = float(v)
        self.d1 = d1
        self.d2 = d2
        self.d3 = d3

    @property
    def n(self):
        return self.d1.shape[0]

    @classmethod
    def constant(cls, c, n):
        return cls(c, np.zeros(n), np.zeros((n, n)), np.zeros((n, n, n)))

    @classmethod
    def variable(cls, x, i, n):
        d1 = np.zeros(n)
        d1[i] = 1.0
        return cls(x, d1, np.zeros((n, n)), np.zeros((n, n, n)))

    def __repr__(self):
        return f"Jet(v={self.v!r}, d1={self.d1.tolist()!r})"

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.n)

    def __add__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.v + other, self.d1, self.d2, self.d3)
        return Jet(self.v + other.v, self.d1 + other.d1,
                   self.d2 + other.d2, self.d3 + other.d3)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.d1, -self.d2, -self.d3)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            c = float(other)
            return Jet(self.v * c, self.d1 * c, self.d2 * c, self.d3 * c)
        a, b = self, other
        d2 = (a.d2 * b.v + b.d2 * a.v
              + np.multiply.outer(a.d1, b.d1) + np.multiply.outer(b.d1, a.d1))
        d3 = (a.d3 * b.v + b.d3 * a.v
              + _sym_outer(a.d2, b.d1) + _sym_outer(b.d2, a.d1))
        return Jet(a.v * b.v, a.d1 * b.v + a.v * b.d1, d2, _mirror3(d3))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            if abs(other) <= EPS_DOMAIN:
                raise DomainViolation("division by near-zero constant")
            return self * (1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k):
        if isinstance(k, int) or float(k).is_integer():
            k = int(k)
            if k == 0:
                return Jet.constant(1.0, self.n)
            if k < 0:
                return (self ** (-k)).reciprocal()
            x = self.v
            return self.compose(x ** k, k * x ** (k - 1),
                                k * (k - 1) * x ** (k - 2) if k >= 2 else 0.0,
                                k * (k - 1) * (k - 2) * x ** (k - 3) if k >= 3 else 0.0)
        if self.v <= EPS_DOMAIN:
            raise DomainViolation("real power of non-positive base", "pow")
        x, p = self.v, float(k)
        return self.compose(x ** p, p * x ** (p - 1), p * (p - 1) * x ** (p - 2),
                            p * (p - 1) * (p - 2) * x ** (p - 3))

    def reciprocal(self, label="div"):
        x = self.v
        if abs(x) <= EPS_DOMAIN:
            raise DomainViolation(f"division by near-zero value {x:.3g}", label)
        r = 1.0 / x
        return self.compose(r, -r * r, 2 * r ** 3, -6 * r ** 4)

    def compose(self, p0, p1, p2, p3):
        """Chain rule for phi(self) given phi and its derivatives at self.v."""
        f1, f2 = self.d1, self.d2
        d2 = p2 * np.multiply.outer(f1, f1) + p1 * f2
        d3 = (p3 * np.multiply.outer(np.multiply.outer(f1, f1), f1)
              + p2 * _sym_outer(f2, f1) + p1 * self.d3)
        return Jet(p0, p1 * f1, d2, _mirror3(d3))

    def is_finite(self):
        return (math.isfinite(self.v) and np.isfinite(self.d1).all()
                and np.isfinite(self.d2).all() and np.isfinite(self.d3).all())


def sin(x):
    if isinstance(x, Jet):
        s, c = math.sin(x.v), math.cos(x.v)
        return x.compose(s, c, -s, -c)
    return math.sin(x)


def cos(x):
    if isinstance(x, Jet):
        s, c = math.sin(x.v), math.cos(x.v)
        return x.compose(c, -s, -c, s)
    return math.cos(x)


def tan(x, label="tan"):
    v = x.v if isinstance(x, Jet) else x
    if abs(math.cos(v)) <= EPS_DOMAIN:
        raise DomainViolation(f"tan evaluated at its pole {v:.6g}", label)
    t = math.tan(v)
    if not isinstance(x, Jet):
        return t
    s = 1.0 + t * t
    return x.compose(t, s, 2 * t * s, s * (2 + 6 * t * t))


def sqrt(x, label="sqrt"):
    v = x.v if isinstance(x, Jet) else x
    if v <= EPS_DOMAIN:
        raise DomainViolation(f"sqrt of non-positive value {v:.6g}", label)
    s = math.sqrt(v)
    if not isinstance(x, Jet):
        return s
    return x.compose(s, 0.5 / s, -0.25 / s ** 3, 0.375 / s ** 5)


def exp(x):
    if isinstance(x, Jet):
        e = math.exp(x.v)
        return x.compose(e, e, e, e)
    return math.exp(x)


def log(x, label="log"):
    v = x.v if isinstance(x, Jet) else x
    if v <= EPS_DOMAIN:
        raise DomainViolation(f"log of non-positive value {v:.6g}", label)
    if not isinstance(x, Jet):
        return math.log(v)
    r = 1.0 / v
    return x.compose(math.log(v), r, -r * r, 2 * r ** 3)


@lru_cache(maxsize=4096)
def _quad(integrand, upper):
    val, _ = integrate.quad(integrand, 0.0, upper, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def antiderivative(integrand, x):
    """``t -> integral_0^t integrand`` evaluated at ``x`` (float or Jet).

    The value comes from adaptive quadrature (cached per upper limit); the
    derivatives come from a jet of the integrand itself, so the result is
    consistent to third order with no differencing.  ``integrand`` must accept
    floats and jets and be hashable.
    """
    v = x.v if isinstance(x, Jet) else float(x)
    val = _quad(integrand, v)
    if not isinstance(x, Jet):
        return val
    a = integrand(Jet.variable(v, 0, 1))
    if not isinstance(a, Jet):
        return x.compose(val, float(a), 0.0, 0.0)
    return x.compose(val, a.v, a.d1[0], a.d2[0, 0])


@dataclass(frozen=True)
class Jet3:
    """Order-3 jet of a vector-valued map ``R^dim_in -> R^dim_out``."""

    value: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    @property
    def dim_in(self):
        return self.d1.shape[1]

    @property
    def dim_out(self):
        return self.value.shape[0]

    @property
    def valid(self):
        return bool(np.isfinite(self.value).all() and np.isfinite(self.d1).all()
                    and np.isfinite(self.d2).all() and np.isfinite(self.d3).all())

    @classmethod
    def from_components(cls, comps, n):
        comps = [c if isinstance(c, Jet) else Jet.constant(c, n) for c in comps]
        return cls(np.array([c.v for c in comps]),
                   np.array([c.d1 for c in comps]),
                   np.array([c.d2 for c in comps]),
                   np.array([c.d3 for c in comps]))


@dataclass(frozen=True)
class MapSpec:
    """A smooth map on an open coordinate box.

    ``evaluator`` takes a sequence of ``dim_in`` coordinates (floats or jets)
    and returns ``dim_out`` components built with this module's functions.
    """

    dim_in: int
    dim_out: int
    evaluator: Callable[[Sequence], Sequence]
    domain: tuple
    label: str = ""

    def check(self, coords):
        x = np.asarray(coords, dtype=float).reshape(-1)
        if x.shape[0] != self.dim_in:
            raise DomainViolation(
                f"{self.label}: expected {self.dim_in} coordinates, got {x.shape[0]}")
        for i, (xi, (lo, hi)) in enumerate(zip(x, self.domain)):
            if not lo < xi < hi:
                raise DomainViolation(
                    f"{self.label}: coordinate {i} = {xi:.6g} outside ({lo:.6g}, {hi:.6g})")
        return x

    def evaluate(self, coords):
        """Plain float evaluation (no derivatives)."""
        x = self.check(coords)
        return np.array([float(c) for c in self.evaluator(list(x))])


def variables(x):
    n = len(x)
    return [Jet.variable(float(xi), i, n) for i, xi in enumerate(x)]


def lift_scalar(f, point, domain=None):
    """Jet of the scalar expression ``f`` (a callable on coordinate jets)."""
    x = np.asarray(point, dtype=float).reshape(-1)
    if domain is not None:
        for i, (xi, (lo, hi)) in enumerate(zip(x, domain)):
            if not lo < xi < hi:
                raise DomainViolation(f"coordinate {i} = {xi:.6g} outside domain")
    return Jet3.from_components([f(variables(x))], len(x))


def lift_immersion(spec, point):
    x = spec.check(point)
    comps = list(spec.evaluator(variables(x)))
    if len(comps) != spec.dim_out:
        raise ValueError(f"{spec.label}: evaluator returned {len(comps)} components")
    return Jet3.from_components(comps, spec.dim_in)


def _stencil_derivative(f_at, idx, h):
    total = 0.0
    for signs in itertools.product((1, -1), repeat=len(idx)):
        offset = {}
        for s, i in zip(signs, idx):
            offset[i] = offset.get(i, 0) + s
        key = tuple(sorted((i, k) for i, k in offset.items() if k))
        total += math.prod(signs) * f_at(key)
    return total / (2 * h) ** len(idx)


def fd_crosscheck(spec, point, step=2e-3):
    """Max |jet - finite difference| for derivative orders 1, 2, 3.

    The reference uses only float evaluations of the map, never the jet path:
    nested central differences at steps ``h`` and ``2h`` combined by one
    Richardson step, so the reference itself is accurate to ``O(h^4)``.
    """
    x = spec.check(point)
    n = spec.dim_in
    reach = 6 * step
    for i in range(n):
        lo, hi = spec.domain[i]
        if not (lo < x[i] - reach and x[i] + reach < hi):
            raise DomainViolation(f"{spec.label}: stencil leaves domain along coordinate {i}")
    cache = {}

    def f_at(key):
        if key not in cache:
            y = x.copy()
            for i, k in key:
                y[i] += k * step
            cache[key] = spec.evaluate(y)
        return cache[key]

    def f_at2(key):
        return f_at(tuple((i, 2 * k) for i, k in key))

    jet = lift_immersion(spec, x)
    out = {}
    for order, arr in ((1, jet.d1), (2, jet.d2), (3, jet.d3)):
        worst = 0.0
        for idx in itertools.combinations_with_replacement(range(n), order):
            fine = _stencil_derivative(f_at, idx, step)
            coarse = _stencil_derivative(f_at2, idx, 2 * step)
            approx = (4 * fine - coarse) / 3
            exact = arr[(slice(None),) + idx]
            worst = max(worst, float(np.max(np.abs(exact - approx))))
        out[order] = worst
    return out


def reparametrize(spec, chart_change, domain, label=None):
    """Compose ``spec`` with a change of coordinates ``chart_change``.

    ``chart_change`` maps new coordinates to the old ones and is written with
    the same jet-aware functions, so the composite stays exact to third order.
    """
    def evaluator(xs):
        return spec.evaluator(list(chart_change(xs)))

    return MapSpec(spec.dim_in, spec.dim_out, evaluator, tuple(domain),
                   label or f"{spec.label}/reparam")
