"""Exception hierarchy shared across the package."""


class LieBundleError(Exception):
    """Base class for all package errors."""


class UsageError(LieBundleError):
    """Caller passed structurally invalid arguments (mismatched descriptors, bad config)."""


class DomainError(LieBundleError):
    """Evaluation requested outside the valid domain (non-finite input, point off chart)."""


class RangeError(LieBundleError):
    """Result falls outside the representable range (logarithm beyond injectivity radius)."""


class DescriptorError(LieBundleError):
    """A group descriptor is internally inconsistent or an element violates membership."""


class StiffnessError(LieBundleError):
    """Integrator step size underflowed."""


class InstabilityError(LieBundleError):
    """Integrator left the group manifold beyond recoverable drift."""


class InconsistencyError(LieBundleError):
    """Two independent evaluation paths disagree beyond tolerance."""


class ConstructionError(LieBundleError):
    """A composite object (glued connection, partition of unity) failed its build checks."""


class ValidationError(LieBundleError):
    """An invariant suite found residuals above tolerance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
