"""Exception types shared across the package."""


class RetimeError(Exception):
    """Base class for all errors raised by this package."""


class IncompatibleSignals(RetimeError, ValueError):
    """Two signals do not have the shapes an operation requires."""


class CsvParseError(RetimeError, ValueError):
    """A CSV file could not be parsed into a signal.

    The offending row number (1-based), when known, is stored in ``row``.
    """

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class DegenerateWarp(RetimeError, ValueError):
    """A warp or monotone profile collapsed below strict monotonicity."""


class InvalidWindow(RetimeError, ValueError):
    """A search window violates its structural invariants."""


class ConfigError(RetimeError, ValueError):
    """An experiment or generator configuration is invalid."""
