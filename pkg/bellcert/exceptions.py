"""
Error taxonomy for the Bell toolkit.

Library code raises these; the command line maps them to exit codes.
"""

from typing import Optional


class BellCertError(Exception):
    """Base class for every toolkit error"""


class ResourceLimitError(BellCertError):
    """Requested index exceeds the configured exact-computation cap"""

    def __init__(self, requested: int, cap: int, hint: str = ""):
        self.requested = requested
        self.cap = cap
        message = f"index {requested} exceeds the exact-computation cap {cap} (set BELL_MAX_N to raise it)"
        if hint:
            message = f"{message}; {hint}"
        super().__init__(message)


class ValidityError(BellCertError):
    """A bound was requested outside the range where it is proven"""

    def __init__(self, condition: str, valid_from: Optional[int] = None):
        self.condition = condition
        self.valid_from = valid_from
        super().__init__(f"precondition violated: {condition}")


class LambertDomainError(BellCertError):
    """Principal-branch W requested for a negative argument"""


class ConvergenceError(BellCertError):
    """An iteration hit its cap without meeting its tolerance"""


class IndeterminateError(BellCertError):
    """Rounding budget too large to decide; retry at higher precision"""

    def __init__(self, message: str, precision: int):
        self.precision = precision
        super().__init__(f"{message} (precision {precision} bits)")


class EmptyEnclosureError(BellCertError):
    """Intersection of certified enclosures is empty"""


class ConfigError(BellCertError):
    """Malformed run configuration"""
