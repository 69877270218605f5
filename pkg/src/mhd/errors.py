"""Exception hierarchy.

Everything raised on purpose derives from :class:`MHDError`.  The CLI maps
:class:`ConsistencyError` to exit status 2 and every other subclass to 1.
"""


class MHDError(Exception):
    """Base class for errors raised by this package."""


class SizeError(MHDError, ValueError):
    """Matrix dimension outside what an operation supports."""


class UnsupportedSizeError(SizeError):
    """Requested mode count cannot be built by block doubling."""


class InvalidGeneratorError(MHDError, ValueError):
    """Matrix fails one of the generator conditions."""


class ModeIndexError(MHDError, IndexError):
    """Mode index outside ``[0, m)`` or an ill-formed index pair."""


class DomainError(MHDError, ValueError):
    """Argument outside the domain where an operation is defined."""


class ConfigurationError(MHDError, ValueError):
    """Source or architecture parameters that describe no valid setup."""


class DegenerateGroupingError(MHDError, ValueError):
    """Column product has a zero entry so no A/B label can be assigned."""


class ContractError(MHDError, ValueError):
    """Arguments that are individually valid but do not belong together."""


class DecompositionError(MHDError, ValueError):
    """Matrix cannot be reduced to two-level orthogonal steps."""


class ConsistencyError(MHDError, RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
