"""Centralised numerical tolerances.

Every threshold used by the verification pipeline lives here so that a
suite can tighten or loosen them in one place.
"""
from dataclasses import dataclass, replace

EPS_DOMAIN = 1e-9  # guard for sqrt / division / tan poles inside jets
EPS_PD = 1e-10  # smallest admissible metric eigenvalue
POLE_MARGIN = 1e-2  # latitude charts are trimmed to |x| <= pi/2 - POLE_MARGIN


@dataclass(frozen=True)
class Tolerances:
    tau_accept: float = 1e-6
    tau_reject: float = 1e-2
    steady_band: float = 1e-9
    cluster: float = 1e-6
    prop41: float = 1e-6
    identity: float = 1e-7
    gauss: float = 1e-6
    codazzi: float = 1e-7
    bianchi: float = 1e-8
    compatibility: float = 1e-9
    fixture: float = 1e-8
    rank: float = 1e-8
    degenerate_plane: float = 1e-12
    umbilic: float = 1e-8
    classify_gap: float = 1e-4
    crosscheck: float = 1e-6

    def __post_init__(self):
        if not self.tau_accept < self.tau_reject:
            raise ValueError("tau_accept must be smaller than tau_reject")

    def with_(self, **changes):
        return replace(self, **changes)


DEFAULT = Tolerances()
