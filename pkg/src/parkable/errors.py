"""Exception hierarchy shared by every module."""


class GeometryError(Exception):
    """Base class for all library errors."""


class DegenerateDirectionError(GeometryError, ValueError):
    """A direction vector was zero (or numerically zero)."""


class DimensionError(GeometryError, ValueError):
    """Operands live in incompatible ambient dimensions."""


class PreconditionError(GeometryError, ValueError):
    """An operation was called outside its domain."""


class InfeasibleError(GeometryError):
    """A construction required a feasible system and got an infeasible one."""


class BodyFormatError(GeometryError, ValueError):
    """A serialized body could not be parsed."""
