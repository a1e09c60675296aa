"""Shared exception types."""


class RadiusCapError(ValueError):
    """Requested generation radius exceeds the configured cap."""


class CodomainTooSmallError(ValueError):
    """Map propagation left the generated portion of the target complex."""


class MarginError(ValueError):
    """Operation requires vertices farther from the boundary of the window."""
