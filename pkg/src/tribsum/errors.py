"""Exception hierarchy shared across the toolkit.

Every domain error derives from :class:`TribsumError` so the CLI can map
any of them to exit code 1. Module-specific exceptions live next to the
code that raises them and inherit from this base.
"""


class TribsumError(Exception):
    """Base class for all domain errors raised by this package."""
