"""Exception types raised across the package."""


class TGAError(Exception):
    """Base class for all errors raised by :mod:`tga`."""


class DivisionByZero(TGAError, ZeroDivisionError):
    pass


class FieldMismatch(TGAError, ValueError):
    pass


class ZeroArgument(TGAError, ValueError):
    pass


class InvalidField(TGAError, ValueError):
    pass


class InvalidTable(TGAError, ValueError):
    pass


class ZeroEntry(TGAError, ValueError):
    pass


class IncompatibleLambda(TGAError, ValueError):
    pass


class AmbientMismatch(TGAError, ValueError):
    pass


class NotCommutative(TGAError, ValueError):
    pass


class PreconditionFailed(TGAError, ValueError):
    pass


class NotAdmissible(TGAError):
    """The base field lacks a root that the structure theorems rely on.

    ``report`` carries the :class:`~tga.deciders.ClosureReport` explaining
    which roots are missing and which extension degree would supply them.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConfigError(TGAError, ValueError):
    pass
