"""Numerical verification of Ricci-soliton structure on Euclidean hypersurfaces."""
from .catalog import build, default_grid, expected_verdict, list_entries
from .config import DEFAULT, Tolerances
from .errors import (BadParameter, DegeneratePlane, DomainViolation, EmptyGrid, GeometryError,
                     InconclusiveClassification, NonPositiveScaling, RankDeficient,
                     SingularMetric)
from .extrinsic import extrinsic_data
from .jets import Jet, Jet3, MapSpec, fd_crosscheck, lift_immersion, lift_scalar
from .soliton import evaluate_grid, fit_lambda, prop41_check, sample

__all__ = [
    "BadParameter", "DEFAULT", "DegeneratePlane", "DomainViolation", "EmptyGrid",
    "GeometryError", "InconclusiveClassification", "Jet", "Jet3", "MapSpec",
    "NonPositiveScaling", "RankDeficient", "SingularMetric", "Tolerances", "build",
    "default_grid", "evaluate_grid", "expected_verdict", "extrinsic_data", "fd_crosscheck",
    "fit_lambda", "lift_immersion", "lift_scalar", "list_entries", "prop41_check", "sample",
]
