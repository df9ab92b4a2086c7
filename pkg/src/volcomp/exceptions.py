"""Exception hierarchy shared by all modules."""


class VolcompError(Exception):
    """Base class for library errors."""


class DomainError(VolcompError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InputError(VolcompError, ValueError):
    """Malformed input (non-unit direction, bad body description, ...)."""


class CapabilityError(VolcompError, NotImplementedError):
    """The body variant does not support the requested evaluation."""


class ScopeError(VolcompError, ValueError):
    """The body is outside the scope of a spectral computation."""


class NumericalFailure(VolcompError, ArithmeticError):
    """A quadrature or evaluation produced a non-finite or degenerate value."""


class SchemaError(VolcompError, ValueError):
    """A configuration document violates the schema.

    ``path`` names the offending key, e.g. ``cases[2].case``.
    """

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class HypothesisUnmet(VolcompError):
    """The hypothesis of an inequality case does not hold for the given bodies."""
