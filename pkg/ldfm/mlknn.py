"""ML-KNN: per-label Bayesian decision over the positive count of the K nearest neighbors."""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DimensionMismatchError, OutOfRangeError, TooFewInstancesError
from .linalg import as_matrix
from .semantics import require_binary

logger = logging.getLogger(__name__)

DEFAULT_NEIGHBORS = 10
DEFAULT_SMOOTHING = 1.0


@dataclass(frozen=True)
class MlknnModel:
    """Trained ML-KNN statistics.

    ``conditional_positive[j, c]`` is the smoothed probability that a training
    instance positive for label j has exactly c positive neighbors;
    ``conditional_negative`` is the same for negative instances.
    """

    k_neighbors: int
    smoothing: float
    train_features: np.ndarray
    train_labels: np.ndarray
    prior_positive: np.ndarray
    conditional_positive: np.ndarray
    conditional_negative: np.ndarray


def nearest_neighbors(queries: np.ndarray, references: np.ndarray, count: int, exclude_self: bool = False) -> np.ndarray:
    """Indices of the ``count`` nearest reference columns for every query column.

    Euclidean distance; ties resolve to the lower reference index.
    """

    distances = cdist(queries.T, references.T, metric='euclidean')

    if exclude_self:
        np.fill_diagonal(distances, np.inf)

    return np.argsort(distances, axis=1, kind='stable')[:, :count]


def _positive_counts(labels: np.ndarray, neighbors: np.ndarray) -> np.ndarray:
    """k x m matrix with the number of positive neighbors per label and query."""

    return labels[:, neighbors].sum(axis=2).astype(np.int64)


def mlknn_train(
    features,
    labels,
    k_neighbors: int = DEFAULT_NEIGHBORS,
    smoothing: float = DEFAULT_SMOOTHING,
) -> MlknnModel:
    """Estimate priors and neighbor-count likelihoods from training data.

    :param features: Training features, r x n
    :param labels: Binary training labels, k x n
    :param k_neighbors: Neighborhood size K
    :param smoothing: Laplace smoothing s
    :return MlknnModel: Trained model
    :raises TooFewInstancesError: When n <= K
    """

    features = as_matrix(features, 'X')
    labels = as_matrix(labels, 'Y')
    require_binary(labels)
    n_instances = features.shape[1]

    if labels.shape[1] != n_instances:
        raise DimensionMismatchError(f'X has {n_instances} instances, Y has {labels.shape[1]}')

    if smoothing <= 0.0:
        raise OutOfRangeError(f'Smoothing must be positive, got {smoothing}')

    if k_neighbors < 1 or n_instances <= k_neighbors:
        raise TooFewInstancesError(f'ML-KNN with K={k_neighbors} needs more than {k_neighbors} instances, got {n_instances}')

    positives = labels.sum(axis=1)
    prior = (smoothing + positives) / (2.0 * smoothing + n_instances)

    neighbors = nearest_neighbors(features, features, k_neighbors, exclude_self=True)
    counts = _positive_counts(labels, neighbors)

    histogram_positive = np.zeros((labels.shape[0], k_neighbors + 1))
    histogram_negative = np.zeros((labels.shape[0], k_neighbors + 1))

    for label in range(labels.shape[0]):
        relevant = labels[label] == 1.0
        histogram_positive[label] = np.bincount(counts[label, relevant], minlength=k_neighbors + 1)
        histogram_negative[label] = np.bincount(counts[label, ~relevant], minlength=k_neighbors + 1)

    buckets = smoothing * (k_neighbors + 1)
    conditional_positive = (smoothing + histogram_positive) / (buckets + positives[:, np.newaxis])
    conditional_negative = (smoothing + histogram_negative) / (buckets + (n_instances - positives)[:, np.newaxis])

    return MlknnModel(
        k_neighbors=k_neighbors,
        smoothing=smoothing,
        train_features=features,
        train_labels=labels,
        prior_positive=prior,
        conditional_positive=conditional_positive,
        conditional_negative=conditional_negative,
    )


def mlknn_predict(model: MlknnModel, features) -> Tuple[np.ndarray, np.ndarray]:
    """Posterior scores and binary predictions for the columns of a test matrix.

    :param model: Trained model
    :param features: Test features, r x m
    :return: ``(scores, predictions)``, both k x m; a label is predicted only
        when its positive posterior is strictly larger than the negative one
    :raises DimensionMismatchError: When the feature dimension differs from training
    """

    features = np.asarray(features, dtype=np.float64)
    n_labels = model.train_labels.shape[0]

    if features.ndim != 2 or features.shape[0] != model.train_features.shape[0]:
        raise DimensionMismatchError(
            f'ML-KNN expects {model.train_features.shape[0]} feature rows, got shape {features.shape}')

    if features.shape[1] == 0:
        return np.zeros((n_labels, 0)), np.zeros((n_labels, 0))

    neighbors = nearest_neighbors(features, model.train_features, model.k_neighbors)
    counts = _positive_counts(model.train_labels, neighbors)

    rows = np.arange(n_labels)[:, np.newaxis]
    posterior_positive = model.prior_positive[:, np.newaxis] * model.conditional_positive[rows, counts]
    posterior_negative = (1.0 - model.prior_positive)[:, np.newaxis] * model.conditional_negative[rows, counts]

    scores = posterior_positive / (posterior_positive + posterior_negative)
    predictions = (posterior_positive > posterior_negative).astype(np.float64)

    return scores, predictions
