"""Named hypersurface families with parameter ranges and expected verdicts.

Entry ids and parameter names form the public vocabulary of the command
line, so they are stable strings.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jets as J
from .config import POLE_MARGIN
from .errors import BadParameter

LAT = math.pi / 2 - POLE_MARGIN


@dataclass(frozen=True)
class Param:
    default: float | None
    lo: float = -math.inf
    hi: float = math.inf
    integer: bool = False
    open_lo: bool = False
    doc: str = ""

    def check(self, name, value):
        if value is None:
            return None
        value = float(value)
        if self.integer:
            if not value.is_integer():
                raise BadParameter(f"{name} must be an integer, got {value}")
            value = int(value)
        if value < self.lo or value > self.hi or (self.open_lo and value == self.lo):
            br = "(" if self.open_lo else "["
            raise BadParameter(f"{name}={value} outside {br}{self.lo}, {self.hi}]")
        return value


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    builder: Callable[[dict], J.MapSpec]
    params: dict
    expected: Callable[[dict], dict]
    grid: Callable[[dict], list]
    source: str
    validate: Callable[[dict], None] = lambda p: None
    notes: str = ""
    scannable: tuple = field(default=())


def sphere_components(r, xs):
    """``r (sin x1, cos x1 sin x2, ..., cos x1..cos x_{k-1} sin x_k, cos x1..cos x_k)``."""
    out = []
    pref = 1.0
    for x in xs:
        out.append(r * pref * J.sin(x))
        pref = pref * J.cos(x)
    out.append(r * pref)
    return out


def _sphere_domain(k):
    return tuple([(-LAT, LAT)] * (k - 1) + [(-math.pi, math.pi)])


def _tensor_grid(axes):
    return [np.array(p, dtype=float) for p in itertools.product(*axes)]


_LAT_SAMPLES = (-0.6, 0.1, 0.7)
_LON_SAMPLES = (-1.0, 0.2, 1.3)


# -- builders -----------------------------------------------------------------

def _hyperplane(p):
    n = p["n"]
    return J.MapSpec(n, n + 1, lambda x: list(x) + [0.0],
                     tuple([(-1e3, 1e3)] * n), f"hyperplane[n={n}]")


def _hypersphere(p):
    n, r = p["n"], p["r"]
    return J.MapSpec(n, n + 1, lambda x: sphere_components(r, x),
                     _sphere_domain(n), f"hypersphere[n={n},r={r:g}]")


def _sphere_grid(n):
    return _tensor_grid([_LAT_SAMPLES] * (n - 1) + [_LON_SAMPLES])


def _cone(p):
    n, beta = p["n"], p["beta"]
    sb, cb = math.sin(beta), math.cos(beta)

    def ev(x):
        t, u = x[0], x[1]
        return [t * sb * J.cos(u), t * sb * J.sin(u), t * cb] + list(x[2:])

    dom = ((0.05, 1e3), (-math.pi, math.pi)) + tuple([(-1e3, 1e3)] * (n - 2))
    return J.MapSpec(n, n + 1, ev, dom, f"cone-flat[n={n},beta={beta:g}]")


def _circular_cylinder(p):
    n, r = p["n"], p["r"]

    def ev(x):
        return [r * J.cos(x[0]), r * J.sin(x[0])] + list(x[1:])

    dom = ((-math.pi, math.pi),) + tuple([(-1e3, 1e3)] * (n - 1))
    return J.MapSpec(n, n + 1, ev, dom, f"circular-hypercylinder[n={n},r={r:g}]")


def _sph_cyl_radius(p):
    return math.sqrt(p["k"] - 1) if p.get("r") is None else p["r"]


def _spherical_cylinder(p):
    n, k = p["n"], p["k"]
    r = _sph_cyl_radius(p)

    # longitude sign keeps the positive-frame normal pointing outward
    flip = -1.0 if (n - k) % 2 else 1.0

    def ev(x):
        return sphere_components(r, list(x[:k - 1]) + [flip * x[k - 1]]) + list(x[k:])

    dom = _sphere_domain(k) + tuple([(-1e3, 1e3)] * (n - k))
    return J.MapSpec(n, n + 1, ev, dom, f"spherical-hypercylinder[n={n},k={k},r={r:g}]")


def rotational_map(profile, n, x1_domain, label):
    """``(x1, f sin x2, f cos x2 sin x3, ..., f cos x2..cos xn)`` for a profile ``f``."""
    def ev(x):
        f = profile(x[0])
        return [x[0]] + [f * c for c in sphere_components(1.0, x[1:])]

    return J.MapSpec(n, n + 1, ev, (x1_domain,) + _sphere_domain(n - 1), label)


def _rot_angles(n):
    if n == 2:
        return [_LON_SAMPLES]
    return [_LAT_SAMPLES] * (n - 2) + [_LON_SAMPLES]


def _rot_i(p):
    b = p["b"]
    return rotational_map(lambda x: J.sqrt(1 + b * b * x * x, "rotational-i profile"),
                          p["n"], (-50.0, 50.0), f"rotational-case-i[n={p['n']},b={b:g}]")


def _rot_ii(p):
    b, c = p["b"], p["c"]
    return rotational_map(lambda x: J.sqrt(b * b - (x + c) ** 2, "rotational-ii profile"),
                          p["n"], (-b - c, b - c), f"rotational-case-ii[n={p['n']},b={b:g},c={c:g}]")


@dataclass(frozen=True)
class ProfileMoment:
    """Integrand ``A(t) sin t`` or ``A(t) cos t`` for ``A(t) = a0 + a1 sin t``.

    Frozen so that quadrature results cache by value.
    """

    a0: float
    a1: float
    kind: str

    def __call__(self, t):
        a = self.a0 + self.a1 * J.sin(t)
        return a * (J.sin(t) if self.kind == "sin" else J.cos(t))


def twisted_immersion(n, a0=2.0, a1=0.0):
    """Hypersurface whose induced metric is ``(A(s) + prod cos y)^2 ds^2 + g_{S^{n-1}}``.

    ``A(s) = a0 + a1 sin s``.  The circle factor rotates as
    ``C (cos s, sin s)`` while the integral part moves along ``(-sin s, cos s)``,
    which makes the ``s`` direction orthogonal to the sphere factor.
    """
    ms, mc = ProfileMoment(a0, a1, "sin"), ProfileMoment(a0, a1, "cos")

    def ev(x):
        s, ys = x[0], x[1:]
        sph = sphere_components(1.0, ys)  # (.., C) with C = prod cos y
        C = sph[-1]
        return ([C * J.cos(s) - J.antiderivative(ms, s),
                 C * J.sin(s) + J.antiderivative(mc, s)] + sph[:-1])

    ymax = math.acos(0.1 ** (1.0 / (n - 1))) if n > 1 else LAT
    ydom = [(-min(ymax, LAT), min(ymax, LAT))] * (n - 1)
    return J.MapSpec(n, n + 1, ev, ((-1.5, 1.5),) + tuple(ydom),
                     f"fixture-6-84[n={n},a0={a0:g},a1={a1:g}]")


def _fixture_684(p):
    return twisted_immersion(p["n"], p["a0"], p["a1"])


# -- validation / expectations -------------------------------------------------

def _need_nonzero(name):
    def check(p):
        if p[name] == 0:
            raise BadParameter(f"{name} must be non-zero")
    return check


def _validate_sph_cyl(p):
    n, k = p["n"], p["k"]
    if not 1 <= k <= n - 1:
        raise BadParameter(f"k={k} outside [1, n-1] for n={n}")
    if p.get("r") is None and k < 2:
        raise BadParameter("the locked radius sqrt(k-1) needs k >= 2; pass r for k = 1")
    if p.get("r") is not None and p["r"] <= 0:
        raise BadParameter("r must be positive")


def _validate_cone(p):
    if not p["beta"] < math.pi / 2:
        raise BadParameter("beta must be < pi/2")


def _validate_rot_ii(p):
    if p["b"] <= 0:
        raise BadParameter("b must be positive")


def _exp(verdict, lam=None, source="", **extra):
    return {"lambda": lam, "verdict": verdict, "source": source, **extra}


def _expect_sph_cyl(p):
    k = p["k"]
    r = _sph_cyl_radius(p)
    if k >= 2 and abs(r - math.sqrt(k - 1)) <= 1e-12:
        return _exp("soliton", 1.0, "Theorem 6.1(5); Example 5.1", classification="shrinking")
    if k == 1:
        return _exp("probe", None, "Example 5.1",
                    claim="S^1(r) x E^(n-1) is a trivial Ricci soliton for every r > 0")
    return _exp("not-soliton", None, "free-radius negative control")


def _expect_rot_ii(p):
    if p["c"] == 0:
        return _exp("soliton", (p["n"] - 1) / p["b"] ** 2, "Lemma 4.1 case (ii), c = 0",
                    classification="shrinking", derived_by_oracle=True)
    return _exp("not-soliton", None, "Lemma 4.1 case (ii), (4.9)")


def _rot_ii_grid(p):
    b, c = p["b"], p["c"]
    return _tensor_grid([(-c - 0.5 * b, -c + 0.1 * b, -c + 0.6 * b)] + _rot_angles(p["n"]))


_DIM = Param(3, 2, 6, integer=True, doc="hypersurface dimension n")

ENTRIES = {
    "hyperplane": CatalogEntry(
        "hyperplane", _hyperplane, {"n": Param(2, 2, 8, integer=True)},
        lambda p: _exp("soliton", 1.0, "Theorem 6.1(1)", classification="shrinking"),
        lambda p: _tensor_grid([(-0.8, 0.3, 1.1)] * p["n"]),
        "Theorem 6.1(1)"),
    "hypersphere": CatalogEntry(
        "hypersphere", _hypersphere,
        {"n": Param(2, 2, 6, integer=True), "r": Param(1.0, 0.0, math.inf, open_lo=True)},
        lambda p: _exp("soliton", (p["n"] - 1) / p["r"] ** 2, "Theorem 6.1(2)",
                       classification="shrinking", derived_by_oracle=True),
        lambda p: _sphere_grid(p["n"]),
        "Theorem 6.1(2)", scannable=("r",)),
    "cone-flat": CatalogEntry(
        "cone-flat", _cone,
        {"n": Param(2, 2, 6, integer=True),
         "beta": Param(math.pi / 4, 0.0, math.pi / 2, open_lo=True)},
        lambda p: _exp("soliton", 1.0, "Theorem 6.1(3)", classification="shrinking",
                       witness="cone over a circle times a Euclidean factor"),
        lambda p: _tensor_grid([(0.1, 0.7, 1.6), (-1.0, 0.3, 2.0)] + [(-0.5, 0.4, 1.2)] * (p["n"] - 2)),
        "Theorem 6.1(3)",
        validate=_validate_cone,
        notes="lines through the origin instantiated as a circular cone; any cone would do"),
    "circular-hypercylinder": CatalogEntry(
        "circular-hypercylinder", _circular_cylinder,
        {"n": _DIM, "r": Param(1.0, 0.0, math.inf, open_lo=True)},
        lambda p: _exp("probe", None, "Example 5.1; Theorem 6.1(4)",
                       claim="S^1(r) x E^(n-1) is a trivial Ricci soliton for every r > 0"),
        lambda p: _tensor_grid([(-1.0, 0.4, 2.2)] + [(-0.7, 0.2, 1.0)] * (p["n"] - 1)),
        "Example 5.1", scannable=("r",)),
    "spherical-hypercylinder": CatalogEntry(
        "spherical-hypercylinder", _spherical_cylinder,
        {"n": Param(4, 3, 7, integer=True), "k": Param(2, 1, 6, integer=True),
         "r": Param(None, 0.0, math.inf, open_lo=True)},
        _expect_sph_cyl,
        lambda p: _tensor_grid(_rot_angles(p["k"] + 1) + [(-0.5, 0.9)] * (p["n"] - p["k"])),
        "Theorem 6.1(5); Example 5.1", validate=_validate_sph_cyl, scannable=("k", "r")),
    "rotational-case-i": CatalogEntry(
        "rotational-case-i", _rot_i,
        {"n": _DIM, "b": Param(1.0, -math.inf, math.inf)},
        lambda p: _exp("not-soliton", None, "Lemma 4.1 case (i), (4.8)"),
        lambda p: _tensor_grid([(0.1, 0.8, 1.5)] + _rot_angles(p["n"])),
        "Lemma 4.1 case (i)", validate=_need_nonzero("b"), scannable=("b",)),
    "rotational-case-ii": CatalogEntry(
        "rotational-case-ii", _rot_ii,
        {"n": _DIM, "b": Param(2.0, 0.0, math.inf, open_lo=True), "c": Param(0.0)},
        _expect_rot_ii, _rot_ii_grid,
        "Lemma 4.1 case (ii)", validate=_validate_rot_ii, scannable=("b", "c")),
    "fixture-6-84": CatalogEntry(
        "fixture-6-84", _fixture_684,
        {"n": Param(3, 2, 5, integer=True), "a0": Param(2.0, 0.0, math.inf, open_lo=True),
         "a1": Param(0.0, -0.5, 0.5)},
        lambda p: _exp("not-soliton", None, "(6.80)-(6.85)"),
        lambda p: _tensor_grid([(-0.6, 0.1, 0.8)] + [(-0.4, 0.05, 0.5)] * (p["n"] - 1)),
        "(6.84)", notes="integrals by adaptive quadrature; a0 > 0.5 keeps P > 0"),
}


def list_entries():
    """Sorted descriptors: id, parameters with defaults, source and notes."""
    out = []
    for key in sorted(ENTRIES):
        e = ENTRIES[key]
        out.append({
            "id": e.id,
            "params": {k: v.default for k, v in e.params.items()},
            "source": e.source,
            "notes": e.notes,
        })
    return out


def get_entry(entry_id):
    try:
        return ENTRIES[entry_id]
    except KeyError:
        raise BadParameter(f"unknown catalog id {entry_id!r}; known: {sorted(ENTRIES)}") from None


def resolve_params(entry_id, params=None):
    entry = get_entry(entry_id)
    params = dict(params or {})
    unknown = set(params) - set(entry.params)
    if unknown:
        raise BadParameter(f"{entry_id}: unknown parameter(s) {sorted(unknown)}")
    out = {}
    for name, decl in entry.params.items():
        out[name] = decl.check(name, params.get(name, decl.default))
    entry.validate(out)
    return out


def build(entry_id, params=None):
    p = resolve_params(entry_id, params)
    return get_entry(entry_id).builder(p)


def expected_verdict(entry_id, params=None):
    p = resolve_params(entry_id, params)
    return get_entry(entry_id).expected(p)


def default_grid(entry_id, params=None):
    p = resolve_params(entry_id, params)
    return get_entry(entry_id).grid(p)


# -- random graph hypersurfaces for identity suites ------------------------------

def random_graph(n, seed, terms=3):
    """Graph ``(x, u(x))`` with ``u`` a seeded sum of plane waves plus a quadratic.

    Coordinates live in ``(-1, 1)^n``; amplitudes stay moderate so curvatures
    are of order one.
    """
    rng = np.random.default_rng(seed)
    amp = rng.uniform(0.2, 0.6, terms)
    freq = rng.uniform(-1.5, 1.5, (terms, n))
    phase = rng.uniform(-math.pi, math.pi, terms)
    B = rng.uniform(-0.4, 0.4, (n, n))
    B = 0.5 * (B + B.T)

    def ev(x):
        u = 0.0
        for a, w, ph in zip(amp, freq, phase):
            u = u + a * J.sin(sum(wi * xi for wi, xi in zip(w, x)) + ph)
        for i in range(n):
            for j in range(n):
                u = u + 0.5 * B[i, j] * x[i] * x[j]
        return list(x) + [u]

    return J.MapSpec(n, n + 1, ev, tuple([(-1.0, 1.0)] * n), f"graph[n={n},seed={seed}]")


def random_points(spec, count, seed, margin=0.1):
    rng = np.random.default_rng(seed)
    lo = np.array([a for a, _ in spec.domain]) + margin
    hi = np.array([b for _, b in spec.domain]) - margin
    return [lo + (hi - lo) * rng.random(spec.dim_in) for _ in range(count)]
