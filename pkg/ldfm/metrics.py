"""Multi-label evaluation metrics and the Friedman test.

Predictions, scores and ground truth are k x m matrices (labels x instances).
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, NamedTuple, Tuple

import numpy as np
from scipy import stats
from sklearn import metrics

from .errors import ShapeMismatchError, TooFewSamplesError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricsReport:
    """Metrics of one evaluation run."""

    hamming_loss: float
    average_precision: float
    micro_f1: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

    @classmethod
    def average(cls, reports: Iterable['MetricsReport']) -> 'MetricsReport':
        """Element-wise mean of several reports, usually one per seed."""

        reports = list(reports)

        if not reports:
            raise TooFewSamplesError('Can not average an empty list of reports')

        return cls(
            hamming_loss=float(np.mean([report.hamming_loss for report in reports])),
            average_precision=float(np.mean([report.average_precision for report in reports])),
            micro_f1=float(np.mean([report.micro_f1 for report in reports])),
        )


class FriedmanResult(NamedTuple):
    statistic: float
    p_value: float
    average_ranks: Tuple[float, ...]


def _pair(first, second, names: Tuple[str, str]) -> Tuple[np.ndarray, np.ndarray]:
    first = np.asarray(first, dtype=np.float64)
    second = np.asarray(second, dtype=np.float64)

    if first.shape != second.shape or first.ndim != 2:
        raise ShapeMismatchError(f'{names[0]} {first.shape} and {names[1]} {second.shape} must be equal 2-D shapes')

    return first, second


def hamming_loss(predictions, truth) -> float:
    """Fraction of misclassified instance-label pairs."""

    predictions, truth = _pair(predictions, truth, ('predictions', 'truth'))

    if truth.size == 0:
        return 0.0

    return float(metrics.hamming_loss(truth.ravel().astype(int), predictions.ravel().astype(int)))


def average_precision(scores, truth) -> float:
    """Label-ranking average precision over instances with at least one relevant label.

    For every relevant label of an instance, the fraction of labels scored at
    or above it that are relevant; averaged per instance, then over instances.
    """

    scores, truth = _pair(scores, truth, ('scores', 'truth'))
    relevant = truth.sum(axis=0) > 0

    if not np.any(relevant):
        logger.warning('No instance has relevant labels, average precision set to 0')
        return 0.0

    return float(metrics.label_ranking_average_precision_score(truth[:, relevant].T.astype(int), scores[:, relevant].T))


def micro_f1(predictions, truth) -> float:
    """F1 over true and false positives pooled across all instance-label pairs.

    Returns 0 when neither predictions nor truth contain a positive.
    """

    predictions, truth = _pair(predictions, truth, ('predictions', 'truth'))

    if truth.size == 0:
        return 0.0

    return float(metrics.f1_score(
        truth.ravel().astype(int),
        predictions.ravel().astype(int),
        average='binary',
        pos_label=1,
        zero_division=0,
    ))


def evaluate(scores, predictions, truth) -> MetricsReport:
    return MetricsReport(
        hamming_loss=hamming_loss(predictions, truth),
        average_precision=average_precision(scores, truth),
        micro_f1=micro_f1(predictions, truth),
    )


def friedman_test(results) -> FriedmanResult:
    """Friedman chi-square test over a methods x datasets table of metric values.

    Values must be oriented so that higher is better; the best method of each
    dataset gets rank 1 and ties share their average rank.

    :param results: Matrix of metric values, methods x datasets
    :return FriedmanResult: Statistic, p-value from chi2 with methods - 1 degrees of freedom, average ranks
    :raises TooFewSamplesError: With less than 2 methods or 2 datasets
    """

    results = np.asarray(results, dtype=np.float64)

    if results.ndim != 2 or results.shape[0] < 2 or results.shape[1] < 2:
        raise TooFewSamplesError(f'Friedman test needs at least 2 methods and 2 datasets, got shape {results.shape}')

    n_methods, n_datasets = results.shape
    ranks = np.column_stack([stats.rankdata(-results[:, column]) for column in range(n_datasets)])
    rank_sums = ranks.sum(axis=1)

    expected = n_datasets * (n_methods + 1) / 2.0
    statistic = 12.0 / (n_datasets * n_methods * (n_methods + 1)) * float(np.sum((rank_sums - expected) ** 2))
    p_value = float(stats.chi2.sf(statistic, n_methods - 1))

    return FriedmanResult(statistic, p_value, tuple(float(rank) for rank in rank_sums / n_datasets))
