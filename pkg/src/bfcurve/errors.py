"""Exception types shared across the package.

Plain ``ValueError`` is used for ordinary bad input (zero inverse, wrong
degree, even-m cube roots, ...).  The classes below mark the two situations
the service and CLI need to tell apart from bad input.
"""


class FieldMismatchError(ValueError):
    """Elements from two different field instances were combined."""


class InvariantViolationError(RuntimeError):
    """An internal consistency check that must never fire did fire.

    Raised when two independent computation routes disagree (point count vs.
    admissible set, direct sums vs. radical classification, ...).  The CLI
    maps this to exit code 2.
    """


class CorruptedSpectrumError(InvariantViolationError):
    """A spectrum failed an exactness check (inexact division, odd value)."""
