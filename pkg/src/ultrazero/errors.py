"""Structured failures with stable machine-readable codes.

Every rejection the toolkit can produce carries a short code string (for
programs) and a human message; ``witness`` holds the offending indices or
values when the failure has a finite certificate.
"""

from __future__ import annotations

from typing import Any


class UltrazeroError(Exception):
    """A validation or precondition failure with a stable code.

    Attributes:
        code: short stable identifier, e.g. "TriangleViolation".
        witness: tuple of indices/values certifying the failure, possibly empty.
    """

    def __init__(self, code: str, message: str, witness: tuple[Any, ...] = ()):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.witness = tuple(witness)


def fail(code: str, message: str, *witness: Any) -> UltrazeroError:
    """Build an UltrazeroError; kept as a helper so call sites stay short."""
    return UltrazeroError(code, message, tuple(witness))
