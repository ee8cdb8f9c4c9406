"""Ricci-soliton defect of the tangential position field on a hypersurface.

For an immersion ``x`` into Euclidean space the candidate soliton tensor is
``S = 1/2 L_{x^T} g + Ric``; the hypersurface is a soliton iff ``S = lambda g``
for one constant ``lambda``.  ``1/2 L_{x^T} g`` is computed twice: from the
Lie derivative of the metric along ``x^T`` and from ``g + rho h``.  The two
agree on every hypersurface, which is checked separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import catalog
from .config import DEFAULT
from .errors import EmptyGrid, GeometryError
from .extrinsic import extrinsic_data, principal_clusters
from .intrinsic import christoffel, curvature, lie_derivative_metric, to_orthonormal


@dataclass(frozen=True)
class SolitonSample:
    point: np.ndarray
    lie_half: np.ndarray
    lie_half_identity: np.ndarray
    ricci: np.ndarray
    g: np.ndarray
    h_xperp: np.ndarray
    lambda_local: np.ndarray
    extrinsic: object = field(repr=False)

    @property
    def soliton_tensor(self):
        return self.lie_half + self.ricci

    def frame_tensor(self):
        """``S`` expressed in a g-orthonormal frame."""
        return to_orthonormal(self.soliton_tensor, self.g)


def sample(spec, point, orientation=1):
    e = extrinsic_data(spec, point, orientation=orientation)
    m = e.metric
    cur = curvature(m, christoffel(m))
    lie_half = 0.5 * lie_derivative_metric(m, e.xT, e.dxT)
    h_xperp = e.rho * e.h
    S = lie_half + cur.ricci
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(np.abs(m.g) >= 1e-10, S / m.g, np.nan)
    return SolitonSample(np.asarray(point, float), lie_half, m.g + h_xperp,
                         cur.ricci, m.g, h_xperp, lam, e)


def identity_check(spec, point, s=None):
    """max |1/2 L_{x^T} g - (g + rho h)| at one point."""
    s = sample(spec, point) if s is None else s
    return float(np.max(np.abs(s.lie_half - s.lie_half_identity)))


def classify(lam, band=DEFAULT.steady_band):
    if lam > band:
        return "shrinking"
    if lam < -band:
        return "expanding"
    return "steady"


@dataclass
class SolitonReport:
    lambda_star: float
    residual_max: float
    verdict: str
    classification: str | None
    identity_max: float
    direction_lambdas: np.ndarray  # (samples, n): eigenvalues of S in orthonormal frames
    n_samples: int
    prop41: list | None = None

    @property
    def direction_lambda_range(self):
        d = self.direction_lambdas
        return [(float(lo), float(hi)) for lo, hi in zip(d.min(axis=0), d.max(axis=0))]


def fit_lambda(samples, tol=DEFAULT):
    """Best constant ``lambda`` over the grid and the worst remaining defect.

    Both the fit and the residual use ``S`` in g-orthonormal frames, so
    ``lambda* = sum tr S / sum n`` minimises the summed squared Frobenius
    defect and is independent of the chart.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise EmptyGrid(f"need at least 2 samples, got {len(samples)}")
    frames = [s.frame_tensor() for s in samples]
    n = frames[0].shape[0]
    lam = math.fsum(np.trace(F) for F in frames) / (n * len(frames))
    eye = np.eye(n)
    residual = max(float(np.max(np.abs(F - lam * eye))) for F in frames)
    ident = max(float(np.max(np.abs(s.lie_half - s.lie_half_identity))) for s in samples)
    if residual < tol.tau_accept:
        verdict = "soliton"
    elif residual > tol.tau_reject:
        verdict = "not-soliton"
    else:
        verdict = "inconclusive"
    cls = classify(lam, tol.steady_band) if verdict == "soliton" else None
    dirs = np.array([np.linalg.eigvalsh(F) for F in frames])
    return SolitonReport(lam, residual, verdict, cls, ident, dirs, len(samples))


def _match_roots(values, roots, tol):
    if len(values) == 1:
        return min(abs(values[0] - r) for r in roots) <= tol
    a, b = values
    r1, r2 = roots
    return ((abs(a - r1) <= tol and abs(b - r2) <= tol)
            or (abs(a - r2) <= tol and abs(b - r1) <= tol))


def prop41_check(report, samples, tol=DEFAULT):
    """Two-principal-curvature test against the soliton constant.

    For each sample: at most two curvature clusters, each matching a root of
    ``k^2 - (n alpha + rho) k + (lambda - 1) = 0``, and ``k1 k2 = lambda - 1``
    where an umbilic point pairs its single value with the complementary root.
    """
    lam = report.lambda_star
    rows = []
    for s in samples:
        e = s.extrinsic
        clusters = principal_clusters(e.kappas, tol.cluster)
        values = [c[0] for c in clusters]
        trace = e.n * e.alpha + e.rho
        disc = trace ** 2 + 4 - 4 * lam
        disc_ok = disc >= -tol.prop41
        root = math.sqrt(max(disc, 0.0))
        roots = ((trace + root) / 2, (trace - root) / 2)
        count_ok = len(clusters) <= 2
        match_ok = count_ok and disc_ok and _match_roots(values, roots, tol.prop41)
        if len(values) == 2:
            product = values[0] * values[1]
        elif len(values) == 1:
            product = values[0] * (trace - values[0])
        else:
            product = math.nan
        product_ok = abs(product - (lam - 1)) <= tol.prop41
        rows.append({
            "point": [float(v) for v in s.point],
            "clusters": [[v, m] for v, m in clusters],
            "n_alpha_plus_rho": trace,
            "roots": list(roots),
            "cluster_count_ok": count_ok,
            "roots_match": bool(match_ok),
            "product": product,
            "product_ok": bool(product_ok),
            "ok": bool(count_ok and match_ok and product_ok),
        })
    report.prop41 = rows
    return [r["ok"] for r in rows]


def evaluate_grid(spec, grid, tol=DEFAULT, orientation=1):
    samples = [sample(spec, p, orientation) for p in grid]
    report = fit_lambda(samples, tol)
    return report, samples


# -- closed-form cross-check for rotational hypersurfaces ----------------------

def closed_form_case_i(b, x1):
    return -b * b / (1 + b * b * x1 * x1 * (1 + b * b)) ** 2


def closed_form_case_ii(b, c, x1):
    return (2 - b * b + c * c - c * x1) / (b * b)


def _rot_spec(case, n, b, c):
    if case == "i":
        return catalog.build("rotational-case-i", {"n": n, "b": b})
    return catalog.build("rotational-case-ii", {"n": n, "b": b, "c": c})


def formula_crosscheck_rotational(case, b, c=0.0, x1_values=(0.0, 1.0), dims=(2, 3, 4),
                                  angles=0.2, tol=DEFAULT):
    """Compare the closed forms for rotational profiles with the numeric pipeline.

    For each dimension ``n`` and sign ``s`` in {+1, -1} the numeric quantity is
    ``(Ric_ii + s <h_ii, x_perp>) / g_ii`` along ``d/dx1`` (and ``d/dx2`` for
    case ii, where the closed form is claimed for every direction).  The
    oracle decides which (sign, n) pairs reproduce the closed form.
    """
    if case not in ("i", "ii"):
        raise ValueError("case must be 'i' or 'ii'")
    rows = []
    for n in dims:
        spec = _rot_spec(case, n, b, c)
        directions = (0,) if case == "i" else (0, 1)
        for x1 in x1_values:
            closed = closed_form_case_i(b, x1) if case == "i" else closed_form_case_ii(b, c, x1)
            rows.extend(_crosscheck_rows(spec, n, x1, angles, directions, closed))
    agreements = []
    for n in dims:
        for sign in ("+", "-"):
            sel = [r for r in rows if r["n"] == n and r["sign"] == sign]
            if sel and max(r["abs_diff"] for r in sel) <= tol.crosscheck:
                agreements.append({"n": n, "sign": sign})
    pointwise = {}
    for x1 in x1_values:
        ok = []
        for n in dims:
            for sign in ("+", "-"):
                sel = [r for r in rows if r["x1"] == x1 and r["n"] == n and r["sign"] == sign]
                if sel and max(r["abs_diff"] for r in sel) <= tol.crosscheck:
                    ok.append({"n": n, "sign": sign})
        pointwise[repr(float(x1))] = ok
    out = {"case": case, "b": b, "c": c, "rows": rows, "agreements": agreements,
           "pointwise_agreements": pointwise}
    if case == "ii" and c != 0:
        # same closed form against the profile centred at +c instead of -c
        diag = []
        for n in dims:
            spec = _rot_spec(case, n, b, -c)
            for x1 in x1_values:
                diag.extend(_crosscheck_rows(spec, n, x1, angles, (0, 1),
                                             closed_form_case_ii(b, c, x1)))
        out["reflected_centre_rows"] = diag
    return out


def _crosscheck_rows(spec, n, x1, angles, directions, closed):
    point = [x1] + [angles] * (n - 1)
    try:
        s = sample(spec, point)
    except GeometryError as exc:
        return [{"n": n, "sign": sg, "direction": i + 1, "x1": x1, "numeric": None,
                 "closed_form": closed, "abs_diff": math.inf, "error": str(exc)}
                for i in directions for sg in ("+", "-")]
    rows = []
    for i in directions:
        for sign in (1, -1):
            num = float((s.ricci[i, i] + sign * s.h_xperp[i, i]) / s.g[i, i])
            rows.append({"n": n, "sign": "+" if sign > 0 else "-", "direction": i + 1,
                         "x1": x1, "numeric": num, "closed_form": closed,
                         "abs_diff": abs(num - closed)})
    return rows


def claim_block(report, expected):
    """Side-by-side record of a published claim and the oracle's verdict."""
    lo_hi = report.direction_lambda_range
    return {
        "claim": expected.get("claim"),
        "claim_source": expected.get("source"),
        "claimed_verdict": "soliton",
        "oracle_verdict": report.verdict,
        "oracle_lambda_star": report.lambda_star,
        "per_direction_lambda": [[lo, hi] for lo, hi in lo_hi],
        "agrees_with_claim": report.verdict == "soliton",
        "oracle_consistent": bool(report.identity_max <= DEFAULT.identity),
    }
