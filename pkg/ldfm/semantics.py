"""Label correlations and the numeric label matrix that seeds the optimizer."""

import numpy as np

from .errors import DimensionMismatchError, NonBinaryLabelError
from .linalg import as_matrix


def require_binary(labels: np.ndarray, name: str = 'Y') -> None:
    if not np.all((labels == 0.0) | (labels == 1.0)):
        raise NonBinaryLabelError(f"'{name}' must only contain 0 and 1 entries")


def jaccard_correlation(labels) -> np.ndarray:
    """Jaccard similarity between every pair of label rows of a k x n matrix.

    ``C[j, l] = |j and l| / |j or l|`` over instances. Pairs of unused labels
    get 0, the diagonal is always 1.

    :param labels: Binary label matrix, k x n
    :return np.ndarray: Symmetric k x k matrix with entries in [0, 1]
    :raises NonBinaryLabelError: When some entry is not 0 or 1
    """

    labels = as_matrix(labels, 'Y')
    require_binary(labels)

    intersection = labels @ labels.T
    counts = np.diag(intersection)
    union = counts[:, np.newaxis] + counts[np.newaxis, :] - intersection

    correlation = np.divide(intersection, union, out=np.zeros_like(intersection), where=union > 0)
    np.fill_diagonal(correlation, 1.0)

    return correlation


def init_numeric_labels(labels, correlation) -> np.ndarray:
    """Numeric labels ``C @ Y``: each instance spreads its active labels onto correlated ones.

    :raises DimensionMismatchError: When C is not k x k for a k x n Y
    """

    labels = as_matrix(labels, 'Y')
    correlation = as_matrix(correlation, 'C')

    if correlation.shape != (labels.shape[0], labels.shape[0]):
        raise DimensionMismatchError(
            f'Correlation must be {labels.shape[0]}x{labels.shape[0]}, got {correlation.shape}')

    return correlation @ labels
