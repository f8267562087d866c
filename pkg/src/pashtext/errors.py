"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, data problems
exit 2, anything else that escapes exits 3.
"""

from __future__ import annotations


class PashtextError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(PashtextError):
    """Bad invocation: unknown command, malformed flag, invalid override."""


class InvalidHyperparameterError(UsageError):
    """A hyperparameter value violates its documented constraints."""


class DataError(PashtextError):
    """Bad input data: malformed corpus, invariant violation, bad dimensions."""


class TrainingError(PashtextError):
    """Training could not produce a valid model."""


class TrainingDivergedError(TrainingError):
    """Loss or an update became non-finite; training aborted."""

    def __init__(self, epoch: int, detail: str = "non-finite loss"):
        self.epoch = epoch
        super().__init__(f"training diverged at epoch {epoch}: {detail}")
