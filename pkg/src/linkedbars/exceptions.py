"""Exception types raised by the package."""


class LinkedBarsError(Exception):
    """Base class for all package errors."""


class InstanceError(LinkedBarsError, ValueError):
    """Malformed problem instance.

    ``element`` holds the offending bar, edge or field when one can be named.
    """

    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class PreconditionError(LinkedBarsError):
    """A solver was asked to handle an instance outside its structural class.

    ``witness`` carries evidence, e.g. the edge indices of a dependent cycle.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(LinkedBarsError):
    """Enumeration would exceed the configured budget."""

    def __init__(self, message, count):
        super().__init__(message)
        self.count = count


class InvalidLayoutError(LinkedBarsError, ValueError):
    def __init__(self, violations):
        super().__init__("invalid layout: " + "; ".join(violations))
        self.violations = list(violations)
