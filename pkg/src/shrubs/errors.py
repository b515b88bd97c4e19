"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class IngestionError(ValueError):
    """A data file could not be turned into a stream of samples.

    ``line`` is the 1-based physical line number in the file, when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(ValueError):
    """A run or sweep configuration is invalid.

    ``key`` names the offending configuration key, when there is one.
    """

    def __init__(self, message, key=None):
        if key is not None and key not in message:
            message = f"{key}: {message}"
        super().__init__(message)
        self.key = key
