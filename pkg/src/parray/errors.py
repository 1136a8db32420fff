"""Exception hierarchy shared by the solver, metrics and CLI layers."""


class ParrayError(Exception):
    """Base class for all package errors."""


class DomainError(ParrayError, ValueError):
    """Argument outside the mathematical domain of a function."""


class ModelValidityError(ParrayError, ValueError):
    """Input outside the validity range of the thin-wire induced-EMF model."""


class GeometryError(ParrayError, ValueError):
    """Invalid or overlapping element geometry."""


class NumericalError(ParrayError, ArithmeticError):
    """Singular systems, degenerate patterns and similar numerical failures."""


class ContractError(ParrayError, ValueError):
    """Arguments that are individually valid but incompatible with each other."""


class ConfigError(ParrayError, ValueError):
    """Malformed scenario configuration."""


class AccuracyError(ParrayError, ValueError):
    """Sampling too coarse for the requested accuracy."""
