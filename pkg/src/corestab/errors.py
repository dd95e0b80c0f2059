"""Exception hierarchy shared across the package."""


class CorestabError(Exception):
    """Base class for all errors raised by corestab."""


class ConfigError(CorestabError):
    """Invalid configuration or parameters, caught before any work runs."""


class DataError(CorestabError):
    """Missing or inconsistent input data."""


class FormatError(DataError):
    """A corestab artifact file is corrupt or has an unsupported version."""
