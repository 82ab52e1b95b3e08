# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from typing import Optional


class EngineError(Exception):
    """Base class for all exceptions in the qnn.reupload package."""
    pass

class InvalidArgumentError(EngineError, ValueError):
    """Exception raised when an operation receives an argument outside its domain."""
    pass

class ConfigError(EngineError):
    """General exception for configuration-related errors."""
    pass

class InvalidYAMLError(ConfigError):
    """Exception raised for errors in YAML format."""
    pass

class DatasetFormatError(EngineError):
    """Exception raised for malformed dataset, CSV or model files."""
    pass

class CsvParseError(DatasetFormatError):
    """
    Exception raised for a malformed row in a CSV file.

    :param message: The error message.
    :type message: str
    :param line_number: The 1-based line number of the offending row.
    :type line_number: int
    """
    def __init__(self, message: str, line_number: int) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number

class DegenerateDataError(EngineError):
    """Exception raised when data has no variance along a required direction."""
    pass

class InsufficientSamplesError(EngineError):
    """
    Exception raised when a class does not hold enough rows for the requested sample.

    :param label: The class label that is short of rows.
    :type label: int
    :param needed: The number of rows requested.
    :type needed: int
    :param available: The number of rows available.
    :type available: int
    """
    def __init__(self, label: int, needed: int, available: int) -> None:
        self.label = label
        self.needed = needed
        self.available = available
        self.deficit = needed - available
        super().__init__(
            f"class {label} needs {needed} rows but only {available} are available (deficit {self.deficit})"
        )

class TrainingAbortedError(EngineError):
    """
    Exception raised when training produces a non-finite loss.

    :param message: The error message.
    :type message: str
    :param iteration: The iteration at which training was aborted.
    :type iteration: int
    """
    def __init__(self, message: str, iteration: int, loss: Optional[float] = None) -> None:
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration
        self.loss = loss

class UndefinedMetricError(EngineError):
    """Exception raised when a metric has a zero denominator."""
    pass

class StructureMismatchError(EngineError):
    """Exception raised when a benchmark row's parameter count or depth differs from its reference table."""
    pass
