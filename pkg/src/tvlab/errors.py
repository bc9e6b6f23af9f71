"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent caller input (bad dimensions, bad indices,
    unparsable files).  The command line maps this to exit code 1."""


class VerificationError(RuntimeError):
    """An internal certificate or postcondition failed re-verification.
    This always indicates a bug, never bad input.  The command line maps
    this to exit code 2."""


class SizeCapError(InputError):
    """An enumeration would exceed the configured size cap.  Raise the cap
    with the TVLAB_SIZE_CAP environment variable if you really mean it."""
