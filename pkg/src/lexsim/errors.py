"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed input file; message carries the offending row where known."""


class ValidationError(ValueError):
    """Structurally parseable input that violates a model constraint."""


class ConfigError(ValueError):
    """Invalid parameter name, value, or task configuration."""
