"""Exception types shared across the toolkit.

The CLI maps each class to a distinct exit code, so solver failures,
bad configs, and bad physical values stay distinguishable in batch runs.
"""


class WptrxError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(WptrxError):
    """Config file is unreadable, malformed, or contains unknown keys."""


class ValidationError(WptrxError):
    """A physical value or precondition is out of range."""


class ConvergenceError(WptrxError):
    """A solver failed to converge or the integration diverged."""
