"""Shared exception base for the toolkit.

Every domain-level failure raised by this package derives from FoonError,
so callers (and the CLI) can separate expected planning/parsing outcomes
from genuine bugs.
"""


class FoonError(Exception):
    """Base class for all domain errors raised by this package."""


class ConfigError(FoonError):
    """A configuration or input file is missing a required entry."""
