"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration: unknown names, bad parameter values, impossible budgets."""


class DataFormatError(ValueError):
    """Malformed data file; the message carries the file location."""


class CollinearityError(RuntimeError):
    """Misfit correlation matrix too ill-conditioned to invert."""
