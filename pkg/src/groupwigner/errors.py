"""Exception hierarchy shared across the package."""


class GroupWignerError(Exception):
    """Base class for all errors raised by this package."""


class AntipodalPair(GroupWignerError):
    """The two group elements are numerically antipodal on the 3-sphere,
    so the minimizing geodesic (and its mid-point) is not unique."""


class AntipodalNode(GroupWignerError):
    """A quadrature node lies on the singular equator of the squaring map."""


class DomainError(GroupWignerError):
    """An argument lies outside the domain of the requested map."""


class OutOfDomain(GroupWignerError):
    """An evaluation point lies outside the sampled domain of a state."""


class InvalidGrid(GroupWignerError):
    """Quadrature grid parameters are unusable, or the grid failed its
    construction-time exactness validation."""


class GridTooCoarse(GroupWignerError):
    """The quadrature grid cannot integrate the requested band exactly."""


class SchemaError(GroupWignerError):
    """A state or node file does not match the documented schema."""


class ConfigError(GroupWignerError):
    """Invalid run configuration."""
