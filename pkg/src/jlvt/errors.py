"""Exception hierarchy shared by every module.

The CLI maps each family onto its own exit status.
"""


class JlvtError(Exception):
    """Base class. ``row`` is filled in when the failure belongs to a dataset row."""

    row = None

    def __str__(self):
        msg = super().__str__()
        if self.row is not None:
            return f"row {self.row}: {msg}"
        return msg


class ConfigError(JlvtError, ValueError):
    pass


class DataError(JlvtError, ValueError):
    pass


class NumericalError(JlvtError, ArithmeticError):
    pass


class DomainError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, message, last_iterate, residual):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class SingularityError(NumericalError):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class MeasurementError(JlvtError, RuntimeError):
    pass
