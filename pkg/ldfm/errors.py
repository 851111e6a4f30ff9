"""Custom ldfm errors."""


class LdfmError(Exception):
    """Base ldfm error."""


class ConfigError(LdfmError):
    """Error for invalid configuration or usage."""


class DataError(LdfmError):
    """Base error for malformed or inconsistent input data."""


class NumericalError(LdfmError):
    """Base error for numerical failures of the solvers."""


class ConfigValueError(ConfigError):
    """Error raised when a configuration rule does not hold."""


class OutOfRangeError(ConfigError):
    """Error for a parameter outside of its accepted range."""


class DimensionMismatchError(DataError):
    """Error for matrices or vectors with incompatible shapes."""


class ShapeMismatchError(DataError):
    """Error for predictions and ground truth with different shapes."""


class NotSquareError(DataError):
    """Error for a matrix that was expected to be square."""


class NonFiniteError(DataError):
    """Error for a matrix containing NaN or Inf entries."""


class NotSymmetricError(NumericalError):
    """Error for a matrix with asymmetry above tolerance."""


class ConvergenceFailureError(NumericalError):
    """Error raised when an eigensolver does not converge."""


class SingularPencilError(NumericalError):
    """Error for a Sylvester equation without a unique solution."""


class SingularSystemError(NumericalError):
    """Error for a singular dense linear system."""


class TooLargeError(NumericalError):
    """Error for a Kronecker system above the configured size guard."""


class NotPositiveDefiniteError(NumericalError):
    """Error for a matrix whose Cholesky factorization fails."""


class DegenerateDataError(NumericalError):
    """Error for data with zero total variance."""


class ArffSyntaxError(DataError):
    """Error for a malformed ARFF document.

    :param message: Error description
    :param line: 1-based line number of the failure
    :param column: 1-based column number of the failure
    """

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownLabelNameError(DataError):
    """Error for a label name that is not declared as ARFF attribute."""


class MissingValueError(DataError):
    """Error for a '?' missing value found in ARFF data."""


class NonBinaryLabelError(DataError):
    """Error for label entries other than 0 or 1."""


class MalformedXmlError(DataError):
    """Error for an unreadable label header."""


class EmptyLabelSetError(DataError):
    """Error for a label header without label elements."""


class SchemaMismatchError(DataError):
    """Error for train and test files with different attributes."""


class DatasetIOError(DataError):
    """Error for dataset or result files that can't be read or written."""


class DatasetError(DataError):
    """Error for a dataset that breaks its own invariants."""


class TooFewInstancesError(DataError):
    """Error for a training set not larger than the neighborhood size."""


class TooFewSamplesError(DataError):
    """Error for a significance test with too few methods or datasets."""


class ZeroInputError(DataError):
    """Error for a reconstruction target with zero norm."""


class ModelFormatError(DataError):
    """Error for a serialized model that can't be parsed."""
