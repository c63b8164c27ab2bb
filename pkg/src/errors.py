"""
Exception hierarchy shared by every module
"""
from typing import Any, Optional


class KappaNetError(Exception):
    """Base class for all engine errors"""


class NetworkValidationError(KappaNetError, ValueError):
    """A network document or object violates a structural or table invariant"""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        self.detail = message
        super().__init__(f"{location}: {message}" if location else message)


class AssignmentError(KappaNetError, ValueError):
    """Evidence, action, query or clamp names an unknown variable or value"""


class EvidenceError(AssignmentError):
    """Evidence that Predict cannot accept (non-root variable)"""


class InconsistentEvidenceError(EvidenceError):
    """Observed value is impossible (kappa INFINITY or probability 0)"""


class ImpossibleConditionError(KappaNetError, ValueError):
    """Conditioning on an event of rank INFINITY or probability 0"""


class EpsilonError(KappaNetError, ValueError):
    """Epsilon outside the open interval (0, 1)"""


class LossOfMassError(KappaNetError, ValueError):
    """Approximate distribution carries more than unit mass"""


class CapExceededError(KappaNetError, RuntimeError):
    """An exponential enumeration would exceed its configured cap"""

    def __init__(self, message: str, cap: int, size: int, partial: Any = None):
        self.cap = cap
        self.size = size
        self.partial = partial
        super().__init__(f"{message} (size {size} exceeds cap {cap})")
