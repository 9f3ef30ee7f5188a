"""Exception hierarchy.

Everything raised on bad input derives from :class:`DepthModError`, which is
also a :class:`ValueError`, so callers that only care about "bad parameters"
can catch that.  :class:`SamplingBudgetError` is the one runtime failure
(a rejection loop ran out of attempts) and is kept separate so the CLI can map
it to its own exit status.
"""


class DepthModError(ValueError):
    """Base class for invalid parameters and unsupported requests."""


class InvalidSizeError(DepthModError):
    pass


class InvalidModulusError(DepthModError):
    pass


class InvalidModeError(DepthModError):
    pass


class FeasibilityError(DepthModError):
    """No tree of the requested size exists for the offspring law."""


class OffspringError(DepthModError):
    pass


class UnsupportedModelError(DepthModError):
    pass


class EnumerationBudgetError(DepthModError):
    pass


class RegimeError(DepthModError):
    """The requested quantity does not exist in this model's regime."""


class DegenerateParameterError(DepthModError):
    pass


class DomainError(DepthModError):
    pass


class DataError(DepthModError):
    pass


class ConfigError(DepthModError):
    pass


class SamplingBudgetError(RuntimeError):
    """Rejection sampling exceeded its attempt cap."""
