"""Exceptions Module.

Root of the tametop error hierarchy. Engine-specific errors are declared next to the
code raising them and derive from `TameTopError`, so that the command line can tell
computation errors (exit code 1) from verification failures (exit code 2).
"""


class TameTopError(Exception):
    """Base class of every error raised by a tametop engine."""

    def __init__(self, message: str) -> None:
        """Initializes the exception with a given message.

        Args:
            message (str): Human readable description of the problem.
        """
        super().__init__(message)


class InputSyntaxError(TameTopError):
    """Raised when a textual input (expression, ordinal) cannot be parsed.

    Attributes:
        position (int): Zero-based offset of the offending character.
    """

    def __init__(self, message: str, position: int) -> None:
        """Initializes the exception.

        Args:
            message (str): What was expected.
            position (int): Zero-based offset in the input text.
        """
        super().__init__(f"{message} (at position {position})")
        self.position: int = position


class ConfigError(TameTopError):
    """Raised when an input file (YAML configuration, complex or pair JSON) is malformed.

    Attributes:
        path (str): The offending file.
    """

    def __init__(self, message: str, path: str) -> None:
        """Initializes the exception.

        Args:
            message (str): What is wrong with the file.
            path (str): Path of the file.
        """
        super().__init__(f"{path}: {message}")
        self.path: str = path
