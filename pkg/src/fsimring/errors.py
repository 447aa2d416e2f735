"""Package exception types. Domain errors on plain function arguments use
ValueError; these classes cover analysis and runner failure modes that
callers are expected to catch."""


class FsimringError(Exception):
    pass


class ConfigError(FsimringError):
    """Invalid or incomplete experiment configuration."""


class ResourceLimitError(FsimringError):
    """Requested run exceeds the sector-dimension guard."""


class ExtractionError(FsimringError):
    """A signal-extraction step found no usable structure."""


class FitError(FsimringError):
    """A least-squares fit could not be performed on the given series."""


class ConvergenceError(FsimringError):
    """Iterative calibration failed to reach tolerance."""
