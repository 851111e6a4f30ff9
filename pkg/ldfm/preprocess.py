"""PCA fitted on training features and applied to both splits."""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, DimensionMismatchError, OutOfRangeError
from .linalg import as_matrix, sym_eigen

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PcaModel:
    """Principal subspace of a d x n feature matrix.

    ``components`` is d x r with orthonormal columns, eigenvalue-descending.
    ``scale`` is all ones unless the model was fit with standardization.
    """

    mean: np.ndarray
    components: np.ndarray
    explained_variance_ratio: np.ndarray
    scale: np.ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[1]

    @property
    def n_features(self) -> int:
        return self.components.shape[0]


def _fix_signs(components: np.ndarray) -> np.ndarray:
    if components.size == 0:
        return components

    pivots = np.argmax(np.abs(components), axis=0)
    signs = np.sign(components[pivots, np.arange(components.shape[1])])
    signs[signs == 0] = 1.0

    return components * signs


def fit_pca(features, variance_retained: float = 0.95, standardize: bool = False) -> PcaModel:
    """Fit PCA on the columns of a d x n matrix.

    Keeps the smallest number of components whose cumulative explained
    variance ratio reaches ``variance_retained``. The covariance uses the
    n - 1 divisor. Each component is signed so that its largest magnitude
    entry is positive.

    :param features: Feature matrix, d x n
    :param variance_retained: Target variance ratio in (0, 1]
    :param standardize: Divide every feature by its standard deviation after centering
    :return PcaModel: Fitted model
    :raises DegenerateDataError: When the total variance is zero
    """

    features = as_matrix(features, 'X')
    n_instances = features.shape[1]

    if not 0.0 < variance_retained <= 1.0:
        raise OutOfRangeError(f'variance_retained must be in (0, 1], got {variance_retained}')

    if n_instances < 2:
        raise DegenerateDataError(f'PCA needs at least 2 instances, got {n_instances}')

    mean = features.mean(axis=1)
    centered = features - mean[:, np.newaxis]
    scale = np.ones(features.shape[0])

    if standardize:
        deviation = centered.std(axis=1, ddof=1)
        scale = np.where(deviation > 0.0, deviation, 1.0)
        centered = centered / scale[:, np.newaxis]

    covariance = centered @ centered.T / (n_instances - 1)
    eigenvalues, eigenvectors = sym_eigen(covariance)
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]

    largest = float(eigenvalues[0]) if eigenvalues.size else 0.0

    if largest <= 0.0:
        raise DegenerateDataError('Feature matrix has zero total variance')

    rank = int(np.sum(eigenvalues > largest * eigenvalues.size * np.finfo(np.float64).eps))
    positive = np.maximum(eigenvalues[:rank], 0.0)
    ratio = positive / float(np.sum(np.maximum(eigenvalues, 0.0)))
    cumulative = np.cumsum(ratio)

    count = int(np.searchsorted(cumulative, variance_retained - 1e-12)) + 1
    count = min(count, rank)

    logger.info(f'PCA keeps {count} of {features.shape[0]} dimensions ({cumulative[count - 1]:.4f} of variance)')

    return PcaModel(
        mean=mean,
        components=_fix_signs(eigenvectors[:, :count]),
        explained_variance_ratio=ratio[:count],
        scale=scale,
    )


def apply_pca(model: PcaModel, features) -> np.ndarray:
    """Project the columns of a d x m matrix onto the principal components.

    :return np.ndarray: r x m matrix ``components.T @ (X - mean) / scale``
    :raises DimensionMismatchError: When X doesn't have d rows
    """

    features = np.asarray(features, dtype=np.float64)

    if features.ndim != 2 or features.shape[0] != model.n_features:
        raise DimensionMismatchError(f'PCA expects {model.n_features} feature rows, got shape {features.shape}')

    centered = (features - model.mean[:, np.newaxis]) / model.scale[:, np.newaxis]

    return model.components.T @ centered


def reconstruct_pca(model: PcaModel, projected) -> np.ndarray:
    """Map r x m projected data back to the d-dimensional feature space."""

    projected = np.asarray(projected, dtype=np.float64)

    return (model.components @ projected) * model.scale[:, np.newaxis] + model.mean[:, np.newaxis]
