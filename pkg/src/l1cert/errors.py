"""Exception hierarchy shared across the package."""


class L1CertError(Exception):
    """Base class for all package errors."""


class InputError(L1CertError):
    """Precondition violation or malformed input (CLI exit code 2)."""


class VerificationError(L1CertError):
    """A certificate or envelope failed exact re-validation (CLI exit code 3)."""


class SeparationFailure(InputError):
    """certify_separation found a subset with no witnessing coordinate."""

    def __init__(self, mask: int, message: str | None = None):
        self.mask = mask
        super().__init__(message or f"no witness for subset mask {mask:#x}")


class InternalInvariantError(L1CertError):
    """A mathematically guaranteed step failed; indicates a bug, not bad input."""
