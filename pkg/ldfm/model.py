"""LDFM optimizer: a linear encoder W (k x d) whose transpose decodes labels back to features.

Alternating exact minimization of

    ||X - W.T Y~||_F^2 + lambda ||W X - Y~||_F^2

over W (a symmetric PSD Sylvester equation) and Y~ (an SPD solve).
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from .errors import DatasetIOError, DimensionMismatchError, ModelFormatError, ZeroInputError
from .linalg import as_matrix, frobenius, solve_spd, solve_sylvester_sympsd
from .rule import Rule
from .ruleset import RuleSet
from .semantics import init_numeric_labels, jaccard_correlation, require_binary

logger = logging.getLogger(__name__)

MODEL_FORMAT = 'ldfm-model'
MODEL_VERSION = 1

LDFM_CONFIG_RULES = RuleSet(
    name='LdfmConfig',
    rules=[
        Rule(name='lambda-positive', resolver=lambda config: config.lambda_ > 0.0),
        Rule(name='max-iterations-positive', resolver=lambda config: config.max_iterations >= 1),
        Rule(name='tolerance-nonnegative', resolver=lambda config: config.objective_tolerance >= 0.0),
    ],
)


@dataclass(frozen=True)
class LdfmConfig:
    """Optimizer parameters.

    :param lambda_: Weight of the encoder term ``||W X - Y~||``
    :param max_iterations: Upper bound of alternating iterations
    :param objective_tolerance: Relative objective decrease below which the loop stops, 0 disables it
    """

    lambda_: float = 1.0
    max_iterations: int = 100
    objective_tolerance: float = 1e-6

    def __post_init__(self):
        LDFM_CONFIG_RULES.apply(self, fail_fast=False)


@dataclass(frozen=True)
class LdfmModel:
    """Fitted encoder ``w`` with the learned numeric labels and the objective trace."""

    w: np.ndarray
    y_numeric: np.ndarray
    config: LdfmConfig = field(default_factory=LdfmConfig)
    objective_trace: Tuple[float, ...] = ()
    iterations_run: int = 0

    def __post_init__(self):
        for name in ('w', 'y_numeric'):
            matrix = np.array(getattr(self, name), dtype=np.float64)
            matrix.setflags(write=False)
            object.__setattr__(self, name, matrix)

    @property
    def n_labels(self) -> int:
        return self.w.shape[0]

    @property
    def n_features(self) -> int:
        return self.w.shape[1]


def _check_shapes(w: np.ndarray, y_numeric: np.ndarray, features: np.ndarray) -> None:
    if w.shape != (y_numeric.shape[0], features.shape[0]):
        raise DimensionMismatchError(
            f'W must be {y_numeric.shape[0]}x{features.shape[0]}, got {w.shape[0]}x{w.shape[1]}')

    if y_numeric.shape[1] != features.shape[1]:
        raise DimensionMismatchError(f'Y~ has {y_numeric.shape[1]} instances, X has {features.shape[1]}')


def objective(w, y_numeric, features, lambda_: float) -> float:
    """Relaxed objective ``||X - W.T Y~||^2 + lambda ||W X - Y~||^2``."""

    w = as_matrix(w, 'W')
    y_numeric = as_matrix(y_numeric, 'Y~')
    features = as_matrix(features, 'X')
    _check_shapes(w, y_numeric, features)

    decoder = features - w.T @ y_numeric
    encoder = w @ features - y_numeric

    return float(np.sum(decoder * decoder) + lambda_ * np.sum(encoder * encoder))


def constrained_objective(w, features) -> float:
    """Reconstruction ``||X - W.T W X||^2`` of the hard-constrained problem."""

    w = as_matrix(w, 'W')
    features = as_matrix(features, 'X')

    if w.shape[1] != features.shape[0]:
        raise DimensionMismatchError(f'W has {w.shape[1]} columns, X has {features.shape[0]} rows')

    residual = features - w.T @ (w @ features)

    return float(np.sum(residual * residual))


def update_w(y_numeric, features, lambda_: float) -> np.ndarray:
    """Minimizer in W with Y~ fixed: ``P W + W Q = R``.

    ``P = Y~ Y~.T``, ``Q = lambda X X.T`` and ``R = (lambda + 1) Y~ X.T``.

    :raises SingularPencilError: When X and Y~ are rank degenerate together
    """

    y_numeric = as_matrix(y_numeric, 'Y~')
    features = as_matrix(features, 'X')

    if y_numeric.shape[1] != features.shape[1]:
        raise DimensionMismatchError(f'Y~ has {y_numeric.shape[1]} instances, X has {features.shape[1]}')

    p_matrix = y_numeric @ y_numeric.T
    q_matrix = lambda_ * (features @ features.T)
    r_matrix = (lambda_ + 1.0) * (y_numeric @ features.T)

    return solve_sylvester_sympsd(p_matrix, q_matrix, r_matrix)


def update_y(w, features, lambda_: float) -> np.ndarray:
    """Minimizer in Y~ with W fixed: ``(W W.T + lambda I) Y~ = (lambda + 1) W X``."""

    w = as_matrix(w, 'W')
    features = as_matrix(features, 'X')

    if w.shape[1] != features.shape[0]:
        raise DimensionMismatchError(f'W has {w.shape[1]} columns, X has {features.shape[0]} rows')

    operator = w @ w.T + lambda_ * np.eye(w.shape[0])

    return solve_spd(operator, (lambda_ + 1.0) * (w @ features))


def _relative_decrease(previous: float, current: float) -> float:
    return (previous - current) / max(abs(previous), np.finfo(np.float64).tiny)


def fit(features, labels, config: LdfmConfig = LdfmConfig(), freeze_labels: bool = False) -> LdfmModel:
    """Learn the encoder W and the numeric labels Y~ from training data.

    Y~ starts as ``C @ Y`` with C the Jaccard label correlation. Every
    iteration updates W, then Y~, and records the objective. W has no
    separate initialization: the first W update defines it.

    :param features: Training features, d x n
    :param labels: Binary training labels, k x n
    :param config: Optimizer parameters
    :param freeze_labels: Keep Y~ fixed at the logical labels and only update W
    :return LdfmModel: Fitted model
    :raises NonBinaryLabelError: When labels are not binary
    :raises SingularPencilError: When the W update has no unique solution
    """

    features = as_matrix(features, 'X')
    labels = as_matrix(labels, 'Y')
    require_binary(labels)

    if features.shape[1] != labels.shape[1]:
        raise DimensionMismatchError(f'X has {features.shape[1]} instances, Y has {labels.shape[1]}')

    lambda_ = config.lambda_

    if freeze_labels:
        y_numeric = labels.copy()
    else:
        y_numeric = init_numeric_labels(labels, jaccard_correlation(labels))

    trace: List[float] = []

    for niter in range(1, config.max_iterations + 1):
        w = update_w(y_numeric, features, lambda_)

        if not freeze_labels:
            y_numeric = update_y(w, features, lambda_)

        trace.append(objective(w, y_numeric, features, lambda_))
        logger.debug(f'step {niter:4d}, objective {trace[-1]:e}')

        if niter > 1 and config.objective_tolerance > 0.0:
            decrease = _relative_decrease(trace[-2], trace[-1])

            if decrease < config.objective_tolerance:
                logger.debug(f'step {niter:4d}, relative decrease {decrease:e} below tolerance')
                break

    logger.info(f'LDFM fit: {len(trace)} iterations, final objective {trace[-1]:e}')

    return LdfmModel(
        w=w,
        y_numeric=y_numeric,
        config=config,
        objective_trace=tuple(trace),
        iterations_run=len(trace),
    )


def _vector(value, length: int, name: str) -> np.ndarray:
    vector = np.asarray(value, dtype=np.float64)

    if vector.shape != (length,):
        raise DimensionMismatchError(f"'{name}' must be a vector of length {length}, got shape {vector.shape}")

    return vector


def encode(model: LdfmModel, sample) -> np.ndarray:
    """Embed a feature vector into the numeric label space: ``W @ x``."""

    return model.w @ _vector(sample, model.n_features, 'x')


def decode(model: LdfmModel, numeric_labels) -> np.ndarray:
    """Reconstruct a feature vector from numeric labels: ``W.T @ y``."""

    return model.w.T @ _vector(numeric_labels, model.n_labels, 'y')


def encode_matrix(model: LdfmModel, features) -> np.ndarray:
    features = as_matrix(features, 'X')

    if features.shape[0] != model.n_features:
        raise DimensionMismatchError(f'Model expects {model.n_features} feature rows, got {features.shape[0]}')

    return model.w @ features


def decode_matrix(model: LdfmModel, numeric_labels) -> np.ndarray:
    numeric_labels = as_matrix(numeric_labels, 'Y~')

    if numeric_labels.shape[0] != model.n_labels:
        raise DimensionMismatchError(f'Model expects {model.n_labels} label rows, got {numeric_labels.shape[0]}')

    return model.w.T @ numeric_labels


def rank_features(model: LdfmModel) -> List[Tuple[int, float]]:
    """Features sorted by the norm of their W column, descending; ties by index."""

    scores = np.linalg.norm(model.w, axis=0)
    indices = np.arange(scores.size)
    order = np.lexsort((indices, -scores))

    return [(int(index), float(scores[index])) for index in order]


def top_features(model: LdfmModel, count: int) -> List[int]:
    return [index for index, _ in rank_features(model)[:count]]


def reconstruction_error(features, w, labels) -> float:
    """Relative decoder error ``||X - W.T L||_F / ||X||_F``.

    :raises ZeroInputError: When X is all zeros
    """

    features = as_matrix(features, 'X')
    w = as_matrix(w, 'W')
    labels = as_matrix(labels, 'labels')

    if w.shape[1] != features.shape[0] or w.shape[0] != labels.shape[0] or labels.shape[1] != features.shape[1]:
        raise DimensionMismatchError(
            f'Incompatible shapes X {features.shape}, W {w.shape}, labels {labels.shape}')

    norm = frobenius(features)

    if norm == 0.0:
        raise ZeroInputError('Reconstruction error is undefined for an all-zero X')

    return frobenius(features - w.T @ labels) / norm


def _format_row(values) -> str:
    return ' '.join(f'{float(value):.17g}' for value in values)


def dumps_model(model: LdfmModel) -> str:
    """Serialize a model to the versioned text format.

    Layout, one item per line::

        ldfm-model 1
        lambda <float>
        max_iterations <int>
        objective_tolerance <float>
        iterations_run <int>
        w <k> <d>
        <k lines of d floats>
        y_numeric <k> <n>
        <k lines of n floats>
        objective_trace <t>
        <t floats on one line>
    """

    lines = [
        f'{MODEL_FORMAT} {MODEL_VERSION}',
        f'lambda {model.config.lambda_:.17g}',
        f'max_iterations {model.config.max_iterations}',
        f'objective_tolerance {model.config.objective_tolerance:.17g}',
        f'iterations_run {model.iterations_run}',
    ]

    for name, matrix in (('w', model.w), ('y_numeric', model.y_numeric)):
        lines.append(f'{name} {matrix.shape[0]} {matrix.shape[1]}')
        lines.extend(_format_row(row) for row in matrix)

    lines.append(f'objective_trace {len(model.objective_trace)}')
    lines.append(_format_row(model.objective_trace))

    return '\n'.join(lines) + '\n'


class _ModelReader:

    def __init__(self, text: str):
        self._lines = text.splitlines()
        self._position = 0

    def next_line(self) -> str:
        if self._position >= len(self._lines):
            raise ModelFormatError('Unexpected end of model file')

        line = self._lines[self._position]
        self._position += 1

        return line

    def field(self, name: str) -> List[str]:
        parts = self.next_line().split()

        if not parts or parts[0] != name:
            raise ModelFormatError(f"Expected '{name}' at line {self._position}")

        return parts[1:]

    def floats(self, count: int) -> np.ndarray:
        line = self.next_line()

        try:
            values = np.array([float(token) for token in line.split()], dtype=np.float64)
        except ValueError as error:
            raise ModelFormatError(f'Invalid number at line {self._position}') from error

        if values.size != count:
            raise ModelFormatError(f'Expected {count} values at line {self._position}, got {values.size}')

        return values

    def matrix(self, name: str) -> np.ndarray:
        rows, cols = (int(token) for token in self.field(name))

        return np.array([self.floats(cols) for _ in range(rows)], dtype=np.float64).reshape((rows, cols))


def loads_model(text: str) -> LdfmModel:
    """Parse a model written by ``dumps_model``.

    :raises ModelFormatError: When the text is not a supported model
    """

    reader = _ModelReader(text)

    try:
        header = reader.next_line().split()

        if header != [MODEL_FORMAT, str(MODEL_VERSION)]:
            raise ModelFormatError(f"Unsupported model header '{' '.join(header)}'")

        config = LdfmConfig(
            lambda_=float(reader.field('lambda')[0]),
            max_iterations=int(reader.field('max_iterations')[0]),
            objective_tolerance=float(reader.field('objective_tolerance')[0]),
        )
        iterations_run = int(reader.field('iterations_run')[0])
        w = reader.matrix('w')
        y_numeric = reader.matrix('y_numeric')
        trace = reader.floats(int(reader.field('objective_trace')[0]))
    except (IndexError, ValueError) as error:
        raise ModelFormatError(f'Malformed model: {error}') from error

    return LdfmModel(
        w=w,
        y_numeric=y_numeric,
        config=config,
        objective_trace=tuple(float(value) for value in trace),
        iterations_run=iterations_run,
    )


def save_model(model: LdfmModel, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(dumps_model(model), encoding='utf-8')
    except OSError as error:
        raise DatasetIOError(f"Can't write model to '{path}': {error}") from error


def load_model(path: Union[str, Path]) -> LdfmModel:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as error:
        raise DatasetIOError(f"Can't read model from '{path}': {error}") from error

    return loads_model(text)
