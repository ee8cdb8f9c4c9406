"""Seeded property suites over random graph hypersurfaces.

Each suite compares two independent computations of the same quantity and
reports the worst discrepancy against its tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import random_graph, random_points
from .config import DEFAULT
from .extrinsic import codazzi_max, gauss_equation_ricci
from .intrinsic import bianchi_residual, christoffel, curvature
from .jets import fd_crosscheck
from .soliton import sample

DEFAULT_SEED = 20240601


@dataclass
class SuiteResult:
    name: str
    worst: float
    tolerance: float
    count: int

    @property
    def passed(self):
        return bool(self.worst <= self.tolerance)


def graph_corpus(seed=DEFAULT_SEED, surfaces=5, points=100):
    """``surfaces`` random graphs alternating n = 2, 3, with ``points`` points spread over them."""
    rng = np.random.default_rng(seed)
    seeds = rng.integers(0, 2 ** 31, size=2 * surfaces)
    corpus = []
    per = [points // surfaces + (1 if k < points % surfaces else 0) for k in range(surfaces)]
    for k in range(surfaces):
        spec = random_graph(2 + k % 2, int(seeds[2 * k]))
        corpus.append((spec, random_points(spec, per[k], int(seeds[2 * k + 1]))))
    return corpus


def run_identity_suites(seed=DEFAULT_SEED, tol=DEFAULT, fd_points=10, fault=0.0):
    """Concurrent identity, Gauss, Codazzi, Bianchi and jet-vs-difference suites.

    ``fault`` perturbs the Lie-derivative path; it exists only so tests can
    check that a corrupted computation is reported.
    """
    worst = {"concurrent-identity": 0.0, "gauss-equation": 0.0, "codazzi": 0.0,
             "bianchi": 0.0, "jet-vs-finite-difference": 0.0}
    count = 0
    corpus = graph_corpus(seed)
    for spec, pts in corpus:
        for pt in pts:
            s = sample(spec, pt)
            e = s.extrinsic
            lie = s.lie_half + fault
            worst["concurrent-identity"] = max(
                worst["concurrent-identity"], float(np.max(np.abs(lie - s.lie_half_identity))))
            worst["gauss-equation"] = max(
                worst["gauss-equation"], float(np.max(np.abs(s.ricci - gauss_equation_ricci(e)))))
            worst["codazzi"] = max(worst["codazzi"], codazzi_max(e))
            cur = curvature(e.metric, christoffel(e.metric))
            worst["bianchi"] = max(worst["bianchi"], bianchi_residual(cur, e.metric.g))
            count += 1
    for spec, pts in corpus:
        for pt in pts[:fd_points // len(corpus) + 1]:
            errs = fd_crosscheck(spec, pt)
            worst["jet-vs-finite-difference"] = max(worst["jet-vs-finite-difference"],
                                                    max(errs.values()))
    tols = {"concurrent-identity": tol.identity, "gauss-equation": tol.gauss,
            "codazzi": tol.codazzi, "bianchi": tol.bianchi,
            "jet-vs-finite-difference": tol.crosscheck}
    return [SuiteResult(k, v, tols[k], count) for k, v in worst.items()]
