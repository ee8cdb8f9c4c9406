"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for numerical-geometry failures."""


class DomainViolation(GeometryError, ValueError):
    """A point or a singular sub-expression fell outside its admissible domain."""

    def __init__(self, message, label=None):
        if label:
            message = f"{message} [{label}]"
        super().__init__(message)
        self.label = label


class SingularMetric(GeometryError):
    pass


class RankDeficient(GeometryError):
    pass


class DegeneratePlane(GeometryError):
    pass


class NonPositiveScaling(GeometryError):
    pass


class InconclusiveClassification(GeometryError):
    pass


class EmptyGrid(GeometryError, ValueError):
    pass


class BadParameter(ValueError):
    """Catalog or CLI parameter outside its declared range."""
