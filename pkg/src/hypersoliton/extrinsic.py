"""Hypersurface geometry of an immersion ``L: U subset R^n -> E^{n+1}``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import RankDeficient
from .intrinsic import MetricData, christoffel, orthonormal_frame
from .jets import lift_immersion


@dataclass(frozen=True)
class ExtrinsicData:
    """Second-order extrinsic data at one point.

    ``h`` is the scalar second fundamental form against ``normal`` and
    ``shape = g^{-1} h``.  ``xT`` holds chart components of the tangential
    position vector and ``dxT[m, i] = d_m xT^i``.
    """

    position: np.ndarray
    tangent: np.ndarray  # (n+1, n), columns d_i L
    normal: np.ndarray
    dnormal: np.ndarray  # (n, n+1), rows d_i N
    metric: MetricData
    ginv: np.ndarray
    h: np.ndarray
    shape: np.ndarray
    kappas: np.ndarray
    alpha: float
    rho: float
    xT: np.ndarray
    dxT: np.ndarray
    jet: object

    @property
    def n(self):
        return self.h.shape[0]

    @property
    def xperp_norm(self):
        return self.rho

    def tangential_position(self):
        return self.tangent @ self.xT

    def reconstruction_error(self):
        return float(np.max(np.abs(self.position - self.tangential_position()
                                   - self.rho * self.normal)))


def _normal_with_derivative(J, d2):
    """Unit normal completing ``J`` to a positive frame, plus its chart derivatives."""
    m, n = J.shape
    raw = np.empty(m)
    draw = np.zeros((n, m))
    for a in range(m):
        minor = np.delete(J, a, axis=0)
        sign = (-1) ** (a + n)
        raw[a] = sign * np.linalg.det(minor)
        dminor = np.delete(d2, a, axis=0)  # dminor[b, c, i] = d_c d_i L^b
        for i in range(n):
            acc = 0.0
            for c in range(n):
                mod = minor.copy()
                mod[:, c] = dminor[:, c, i]
                acc += np.linalg.det(mod)
            draw[i, a] = sign * acc
    norm = np.linalg.norm(raw)
    N = raw / norm
    dN = (draw - np.outer(draw @ N, N)) / norm
    return N, dN


def principal_curvatures(h, g):
    """Generalised eigenvalues of ``(h, g)`` in ascending order."""
    C = orthonormal_frame(g)
    Ci = np.linalg.inv(C)
    B = Ci @ h @ Ci.T
    return np.linalg.eigvalsh(0.5 * (B + B.T))


def principal_clusters(kappas, tol=DEFAULT.cluster):
    """Group sorted eigenvalues closer than ``tol``; returns ``[(value, multiplicity)]``."""
    clusters = []
    for k in np.sort(kappas):
        if clusters and abs(k - clusters[-1][0][-1]) <= tol:
            clusters[-1][0].append(k)
        else:
            clusters.append([[k]])
    return [(float(np.mean(c[0])), len(c[0])) for c in clusters]


def extrinsic_data(spec, point, orientation=1, tol=DEFAULT):
    if spec.dim_out != spec.dim_in + 1:
        raise ValueError(f"{spec.label} is not a hypersurface map")
    jet = lift_immersion(spec, point)
    J = jet.d1
    smin = np.linalg.svd(J, compute_uv=False)[-1]
    if not smin > tol.rank:
        raise RankDeficient(f"{spec.label}: Jacobian rank-deficient at {list(point)} "
                            f"(smallest singular value {smin:.3g})")
    metric = MetricData.from_immersion(jet)
    ginv = metric.inverse()
    N, dN = _normal_with_derivative(J, jet.d2)
    if orientation < 0:
        N, dN = -N, -dN
    h = np.einsum("aij,a->ij", jet.d2, N)
    h = 0.5 * (h + h.T)
    shape = ginv @ h
    kappas = principal_curvatures(h, metric.g)
    x = jet.value
    b = J.T @ x
    xT = ginv @ b
    # d_m <x, L_j> = g_mj + <x, L_jm>
    db = metric.g + np.einsum("a,ajm->mj", x, jet.d2)
    dginv = -np.einsum("ia,mab,bj->mij", ginv, metric.dg, ginv)
    dxT = np.einsum("mij,j->mi", dginv, b) + db @ ginv.T
    return ExtrinsicData(
        position=x, tangent=J, normal=N, dnormal=dN, metric=metric, ginv=ginv,
        h=h, shape=shape, kappas=kappas, alpha=float(np.trace(shape)) / spec.dim_in,
        rho=float(x @ N), xT=xT, dxT=dxT, jet=jet)


def gauss_equation_ricci(e, g=None):
    """Ricci tensor of a hypersurface of flat space: ``(tr A) h - h g^{-1} h``."""
    ginv = e.ginv if g is None else np.linalg.inv(g)
    H = float(np.einsum("ij,ij->", ginv, e.h))
    ric = H * e.h - e.h @ ginv @ e.h
    return 0.5 * (ric + ric.T)


def _covariant_dh(e):
    """``(nabla_i h)_jk`` with ``d_i h_jk = <L_jki, N> + <L_jk, d_i N>``."""
    d3, d2 = e.jet.d3, e.jet.d2
    dh = (np.einsum("ajki,a->ijk", d3, e.normal)
          + np.einsum("ajk,ia->ijk", d2, e.dnormal))
    G = christoffel(e.metric).gamma
    t = np.einsum("mij,mk->ijk", G, e.h)
    return dh - t - np.swapaxes(t, 1, 2)


def codazzi_residual(spec, point, i, j, k, e=None):
    e = extrinsic_data(spec, point) if e is None else e
    cov = _covariant_dh(e)
    return float(abs(cov[i, j, k] - cov[j, i, k]))


def codazzi_max(e):
    cov = _covariant_dh(e)
    return float(np.max(np.abs(cov - np.swapaxes(cov, 0, 1))))


def position_split(spec, point, e=None):
    e = extrinsic_data(spec, point) if e is None else e
    return e.xT.copy(), e.rho
