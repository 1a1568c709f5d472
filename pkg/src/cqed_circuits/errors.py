"""Exception hierarchy.

Input problems derive from :class:`InputError`; numerical failures (runaway
trajectories, singular circuits, unresolvable peaks) from :class:`NumericalError`.
The CLI maps the two families onto distinct exit codes.
"""


class CqedError(Exception):
    """Base class for all package errors."""


class InputError(CqedError, ValueError):
    """Invalid user-supplied data."""


class NumericalError(CqedError, ArithmeticError):
    """A computation could not produce a meaningful result."""


class InvalidParameterError(InputError):
    pass


class DegenerateInversionError(InvalidParameterError):
    """Circuit element values diverge for zero inversion."""


class StepSizeError(InputError):
    pass


class SeriesTooShortError(InputError):
    pass


class NetlistError(InputError):
    """Netlist syntax or semantic error, tagged with its line number."""

    def __init__(self, message, line=None):
        self.line = line
        self.reason = message
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InstabilityError(NumericalError):
    """Mean-field dynamics have growing (complex-frequency) modes."""


class DivergenceError(NumericalError):
    def __init__(self, message, time=None):
        self.time = time
        super().__init__(message)


class TopologyError(NumericalError):
    """The nodal system is singular, e.g. a floating subcircuit."""


class ExtractionError(NumericalError):
    """A required spectral peak could not be resolved."""
