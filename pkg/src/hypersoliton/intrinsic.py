"""Intrinsic Riemannian quantities at a single chart point.

Index layout used throughout:

* ``dg[k, i, j]  = d_k g_ij`` and ``d2g[l, k, i, j] = d_l d_k g_ij``
* ``gamma[k, i, j] = Gamma^k_ij`` and ``dgamma[m, k, i, j] = d_m Gamma^k_ij``
* ``riemann[l, i, j, k] = R^l_ijk`` with
  ``R(d_i, d_j) d_k = R^l_ijk d_l`` and
  ``R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik``,
  so the unit round sphere has sectional curvature +1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, EPS_PD
from .errors import DegeneratePlane, SingularMetric


def _sym_pair(a, i, j):
    return 0.5 * (a + np.swapaxes(a, i, j))


@dataclass(frozen=True)
class MetricData:
    g: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray

    @property
    def n(self):
        return self.g.shape[0]

    def inverse(self):
        """Inverse metric, guarded against loss of positive definiteness."""
        lo = np.linalg.eigvalsh(self.g)[0]
        if not lo > EPS_PD:
            raise SingularMetric(f"metric not positive definite (min eigenvalue {lo:.3g})")
        return np.linalg.inv(self.g)

    @classmethod
    def from_immersion(cls, jet):
        """Induced metric ``<d_i L, d_j L>`` and its derivatives from a 3-jet."""
        L1 = jet.d1.T  # (n, m): L1[i] = d_i L
        L2 = np.moveaxis(jet.d2, 0, -1)  # (n, n, m)
        L3 = np.moveaxis(jet.d3, 0, -1)  # (n, n, n, m)
        g = L1 @ L1.T
        # d_k g_ij = <L_ik, L_j> + <L_i, L_jk>
        t = np.einsum("ika,ja->kij", L2, L1)
        dg = t + np.swapaxes(t, 1, 2)
        # d_l d_k g_ij = <L_ikl, L_j> + <L_ik, L_jl> + <L_il, L_jk> + <L_i, L_jkl>
        u = np.einsum("ikla,ja->lkij", L3, L1)
        w = np.einsum("ika,jla->lkij", L2, L2)
        d2g = u + np.swapaxes(u, 2, 3) + w + np.swapaxes(w, 2, 3)
        return cls(_sym_pair(g, 0, 1), dg, _sym_pair(d2g, 0, 1))

    @classmethod
    def from_component_jets(cls, comps):
        """Metric from an ``n x n`` nested list of component jets (or floats)."""
        n = len(comps)
        g = np.zeros((n, n))
        dg = np.zeros((n, n, n))
        d2g = np.zeros((n, n, n, n))
        for i in range(n):
            for j in range(i, n):
                c = comps[i][j]
                if hasattr(c, "d1"):
                    g[i, j] = g[j, i] = c.v
                    dg[:, i, j] = dg[:, j, i] = c.d1
                    d2g[:, :, i, j] = d2g[:, :, j, i] = c.d2
                else:
                    g[i, j] = g[j, i] = float(c)
        return cls(g, dg, d2g)


@dataclass(frozen=True)
class ChristoffelData:
    gamma: np.ndarray
    dgamma: np.ndarray
    ginv: np.ndarray


@dataclass(frozen=True)
class CurvatureData:
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float

    def lowered(self, g):
        """``R_ijkl = g(R(d_i, d_j) d_k, d_l)``."""
        return np.einsum("lm,mijk->ijkl", g, self.riemann)


@dataclass(frozen=True)
class ScalarFieldJet:
    value: float
    grad_coords: np.ndarray
    hess_coords: np.ndarray

    @classmethod
    def from_jet(cls, jet):
        """Accepts a scalar :class:`~hypersoliton.jets.Jet` or a one-row Jet3."""
        if hasattr(jet, "v"):
            return cls(jet.v, jet.d1.copy(), jet.d2.copy())
        return cls(float(jet.value[0]), jet.d1[0].copy(), jet.d2[0].copy())


def christoffel(m):
    ginv = m.inverse()
    # T[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij
    dg = m.dg
    T = np.transpose(dg, (2, 0, 1)) + np.transpose(dg, (1, 2, 0)) - dg
    gamma = 0.5 * np.einsum("kl,lij->kij", ginv, T)
    d2g = m.d2g
    # dT[m, l, i, j] = d_m d_i g_jl + d_m d_j g_il - d_m d_l g_ij
    dT = (np.transpose(d2g, (0, 3, 1, 2)) + np.transpose(d2g, (0, 2, 3, 1)) - d2g)
    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    dgamma = 0.5 * (np.einsum("mkl,lij->mkij", dginv, T)
                    + np.einsum("kl,mlij->mkij", ginv, dT))
    return ChristoffelData(_sym_pair(gamma, 1, 2), _sym_pair(dgamma, 2, 3), ginv)


def curvature(m, c):
    G, dG = c.gamma, c.dgamma
    # dG[i, l, j, k] = d_i G^l_jk
    R = (np.einsum("iljk->lijk", dG) - np.einsum("jlik->lijk", dG)
         + np.einsum("lim,mjk->lijk", G, G) - np.einsum("ljm,mik->lijk", G, G))
    ric = np.einsum("iijk->jk", R)
    ric = 0.5 * (ric + ric.T)
    scalar = float(np.einsum("jk,jk->", c.ginv, ric))
    return CurvatureData(R, ric, scalar)


def sectional(m, cur, X, Y, tol=DEFAULT.degenerate_plane):
    """Sectional curvature of the plane spanned by coordinate fields X, Y."""
    if X == Y:
        raise DegeneratePlane("coordinate plane needs two distinct directions")
    g = m.g
    denom = g[X, X] * g[Y, Y] - g[X, Y] ** 2
    if denom < tol:
        raise DegeneratePlane(f"plane ({X}, {Y}) is degenerate: {denom:.3g}")
    # R(X, Y, Y, X) = g(R(X, Y)Y, X)
    num = float(g[X] @ cur.riemann[:, X, Y, Y])
    return num / denom


def lie_derivative_metric(m, V, dV, c=None):
    """``(L_V g)_ij`` from coordinate components ``V^k`` and ``dV[i, k] = d_i V^k``."""
    M = np.einsum("kj,ik->ij", m.g, dV)
    return M + M.T + np.einsum("k,kij->ij", V, m.dg)


def scalar_calculus(m, c, f):
    """Gradient (contravariant components) and coordinate Hessian of ``f``."""
    grad = c.ginv @ f.grad_coords
    hess = f.hess_coords - np.einsum("kij,k->ij", c.gamma, f.grad_coords)
    return grad, 0.5 * (hess + hess.T)


def compatibility_residual(m, c):
    """max |d_k g_ij - G^l_ki g_lj - G^l_kj g_il| (metric compatibility)."""
    t = np.einsum("lki,lj->kij", c.gamma, m.g)
    return float(np.max(np.abs(m.dg - t - np.swapaxes(t, 1, 2))))


def bianchi_residual(cur, g):
    R = cur.lowered(g)
    s = R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))
    return float(np.max(np.abs(s)))


def riemann_symmetry_residual(cur, g):
    """Largest violation among the pair (anti)symmetries, relative to max |R|."""
    R = cur.lowered(g)
    scale = max(1.0, float(np.max(np.abs(R))))
    worst = max(np.max(np.abs(R + np.swapaxes(R, 0, 1))),
                np.max(np.abs(R + np.swapaxes(R, 2, 3))),
                np.max(np.abs(R - np.transpose(R, (2, 3, 0, 1)))))
    return float(worst) / scale


def orthonormal_frame(g):
    """Lower-triangular ``C`` with ``g = C C^T``; ``C^{-1} S C^{-T}`` is S in a g-orthonormal frame."""
    try:
        return np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric("metric is not positive definite") from exc


def to_orthonormal(S, g):
    C = orthonormal_frame(g)
    Ci = np.linalg.inv(C)
    out = Ci @ S @ Ci.T
    return 0.5 * (out + out.T)
