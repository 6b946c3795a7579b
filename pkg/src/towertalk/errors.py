"""Exception types shared across the package."""


class TowertalkError(Exception):
    """Base class for all package errors."""


class OutOfGridError(TowertalkError):
    """A chunk expansion placed a block outside the 3x3 grid."""


class UnknownTowerError(TowertalkError, KeyError):
    """Requested a tower id that has no program library."""


class CategoryMismatchError(TowertalkError, ValueError):
    """A signal was evaluated against a symbol outside its referential category."""


class ZeroMassError(TowertalkError, ArithmeticError):
    """A probability vector lost all its mass (contradictory evidence)."""


class MisalignedMessageError(TowertalkError, ValueError):
    """A message does not line up step-for-step with its program's symbols."""


class NoFiniteCandidateError(TowertalkError, ValueError):
    """Softmax choice was asked to pick among candidates with no finite utility."""


class EmptyInputError(TowertalkError, ValueError):
    """An aggregation or writer received no data."""


class NonFiniteLossError(TowertalkError, ArithmeticError):
    """The objective returned NaN or infinity at an evaluated point."""


class ConfigParseError(TowertalkError, ValueError):
    """A configuration file could not be parsed; message carries line/field."""


class ConfigValidationError(TowertalkError, ValueError):
    """A configuration value violates a documented bound."""
