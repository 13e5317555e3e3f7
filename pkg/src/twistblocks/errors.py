"""Error taxonomy shared across the package.

The CLI maps these onto exit codes: ValidationError -> 2, WindowError -> 3,
MissingDataError -> 4.
"""


class TwistblocksError(Exception):
    pass


class ValidationError(TwistblocksError):
    """Invalid input data; the message names the violated constraint."""


class WindowError(TwistblocksError):
    """A computation would leave the modeled truncation window."""


class MissingDataError(TwistblocksError):
    """Required table entries are absent (e.g. fusion values)."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = list(missing)


class InternalCheckError(TwistblocksError):
    """An identity that must hold by construction failed; indicates a bug."""
