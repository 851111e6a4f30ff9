"""Experiment configuration: defaults, flat key-value files and validation rules."""

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

from .errors import ConfigError, ConfigValueError, DatasetIOError
from .model import LdfmConfig
from .rule import Rule
from .ruleset import RuleSet

FORMATS = ('csv', 'json')

DEFAULT_LAMBDA_GRID = (0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0)
DEFAULT_ITERATION_GRID = (1, 20, 40, 60, 80, 100)


def _ascending(values: Sequence[int]) -> bool:
    return all(first < second for first, second in zip(values, values[1:]))


EXPERIMENT_RULES = RuleSet(
    name='ExperimentConfig',
    rules=[
        Rule(name='lambda-positive', resolver=lambda config: config.lambda_ > 0.0),
        Rule(name='max-iterations-positive', resolver=lambda config: config.max_iterations >= 1),
        Rule(name='tolerance-nonnegative', resolver=lambda config: config.objective_tolerance >= 0.0),
        Rule(name='pca-variance-range', resolver=lambda config: 0.0 <= config.pca_variance <= 1.0),
        Rule(
            name='feature-counts-ascending',
            resolver=lambda config: (
                len(config.feature_counts) > 0 and config.feature_counts[0] >= 1 and _ascending(config.feature_counts)),
        ),
        Rule(name='seeds-nonempty', resolver=lambda config: len(config.seeds) > 0),
        Rule(
            name='missing-proportions-range',
            resolver=lambda config: all(0.0 <= value <= 1.0 for value in config.missing_proportions),
        ),
        Rule(
            name='missing-features-positive',
            resolver=lambda config: config.missing_feature_count is None or config.missing_feature_count >= 1,
        ),
        Rule(
            name='lambda-grid-positive',
            resolver=lambda config: len(config.lambda_grid) > 0 and all(value > 0.0 for value in config.lambda_grid),
        ),
        Rule(
            name='iteration-grid-positive',
            resolver=lambda config: len(config.iteration_grid) > 0 and all(value >= 1 for value in config.iteration_grid),
        ),
        Rule(name='neighbors-positive', resolver=lambda config: config.k_neighbors >= 1),
        Rule(name='smoothing-positive', resolver=lambda config: config.smoothing > 0.0),
        Rule(name='format-known', resolver=lambda config: config.output_format in FORMATS),
        Rule(name='workers-positive', resolver=lambda config: config.workers >= 1),
    ],
)

DATASET_RULES = RuleSet(
    name='ExperimentConfig',
    rules=[
        Rule(
            name='dataset-paths-set',
            resolver=lambda config: bool(config.train_path and config.test_path and config.labels_xml),
            error=ConfigValueError('--train, --test and --labels-xml are required'),
        ),
    ],
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Every setting of an experiment run; a snapshot of it re-runs the experiment."""

    train_path: Optional[str] = None
    test_path: Optional[str] = None
    labels_xml: Optional[str] = None
    name: Optional[str] = None
    lambda_: float = 1.0
    max_iterations: int = 100
    objective_tolerance: float = 1e-6
    pca_variance: float = 0.95
    standardize: bool = False
    feature_counts: Tuple[int, ...] = tuple(range(1, 101))
    seeds: Tuple[int, ...] = (0,)
    missing_proportions: Tuple[float, ...] = (0.2, 0.4, 0.6, 0.8)
    missing_feature_count: Optional[int] = None
    lambda_grid: Tuple[float, ...] = DEFAULT_LAMBDA_GRID
    iteration_grid: Tuple[int, ...] = DEFAULT_ITERATION_GRID
    k_neighbors: int = 10
    smoothing: float = 1.0
    random_baseline: bool = True
    output_dir: str = 'results'
    output_format: str = 'csv'
    workers: int = 1

    def __post_init__(self):
        for name in ('feature_counts', 'seeds', 'missing_proportions', 'lambda_grid', 'iteration_grid'):
            object.__setattr__(self, name, tuple(getattr(self, name)))

        EXPERIMENT_RULES.apply(self, fail_fast=False)

    def ldfm_config(self) -> LdfmConfig:
        return LdfmConfig(
            lambda_=self.lambda_,
            max_iterations=self.max_iterations,
            objective_tolerance=self.objective_tolerance,
        )

    def require_dataset(self) -> None:
        DATASET_RULES.apply(self)

    def snapshot(self) -> Dict[str, Any]:
        """JSON compatible copy of every field."""

        return {
            key: list(value) if isinstance(value, tuple) else value
            for key, value in dataclasses.asdict(self).items()
        }

    @classmethod
    def from_snapshot(cls, snapshot: Dict[str, Any]) -> 'ExperimentConfig':
        names = {item.name for item in dataclasses.fields(cls)}
        unknown = sorted(set(snapshot) - names)

        if unknown:
            raise ConfigError(f'Unknown configuration fields {unknown}')

        return cls(**snapshot)

    def replace(self, **changes) -> 'ExperimentConfig':
        return dataclasses.replace(self, **changes)


def parse_counts(text: str) -> Tuple[int, ...]:
    """Parse '1..100', '5,10,20' or a mix such as '1..10,20,50'."""

    counts = []

    for part in text.split(','):
        part = part.strip()

        if not part:
            continue

        try:
            if '..' in part:
                first, last = part.split('..', 1)
                counts.extend(range(int(first), int(last) + 1))
            else:
                counts.append(int(part))
        except ValueError as error:
            raise ConfigError(f"Invalid count list '{text}'") from error

    return tuple(counts)


def parse_floats(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(',') if part.strip())
    except ValueError as error:
        raise ConfigError(f"Invalid number list '{text}'") from error


def parse_bool(text: str) -> bool:
    value = text.strip().lower()

    if value in ('1', 'true', 'yes', 'on'):
        return True

    if value in ('0', 'false', 'no', 'off'):
        return False

    raise ConfigError(f"Invalid boolean '{text}'")


def _number(kind: Callable[[str], Any]) -> Callable[[str], Any]:

    def convert(text: str) -> Any:
        try:
            return kind(text)
        except ValueError as error:
            raise ConfigError(f"Invalid {kind.__name__} value '{text}'") from error

    return convert


# flag name -> (field name, converter)
KEYS: Dict[str, Tuple[str, Callable[[str], Any]]] = {
    'train': ('train_path', str),
    'test': ('test_path', str),
    'labels-xml': ('labels_xml', str),
    'name': ('name', str),
    'lambda': ('lambda_', _number(float)),
    'max-iter': ('max_iterations', _number(int)),
    'tolerance': ('objective_tolerance', _number(float)),
    'pca-variance': ('pca_variance', _number(float)),
    'standardize': ('standardize', parse_bool),
    'features': ('feature_counts', parse_counts),
    'seed': ('seeds', lambda text: parse_counts(text)[:1]),
    'seeds': ('seeds', parse_counts),
    'missing': ('missing_proportions', parse_floats),
    'missing-features': ('missing_feature_count', _number(int)),
    'lambda-grid': ('lambda_grid', parse_floats),
    'iter-grid': ('iteration_grid', parse_counts),
    'k-neighbors': ('k_neighbors', _number(int)),
    'smoothing': ('smoothing', _number(float)),
    'random-baseline': ('random_baseline', parse_bool),
    'out': ('output_dir', str),
    'format': ('output_format', str),
    'workers': ('workers', _number(int)),
}


def parse_config_text(text: str) -> Dict[str, str]:
    """Read ``key = value`` lines; blank lines and ``#`` comments are skipped.

    :raises ConfigError: For lines without '=' or unknown keys
    """

    values = {}

    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()

        if not line:
            continue

        if '=' not in line:
            raise ConfigError(f"Config line {number}: expected 'key = value'")

        key, value = (part.strip() for part in line.split('=', 1))

        if key not in KEYS:
            raise ConfigError(f"Config line {number}: unknown key '{key}'")

        values[key] = value

    return values


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as error:
        raise DatasetIOError(f"Can't read config '{path}': {error}") from error

    return parse_config_text(text)


def build_config(values: Dict[str, str], base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """Apply flag-keyed string values on top of a base config (defaults when omitted)."""

    changes = {}

    for key, text in values.items():
        if key not in KEYS:
            raise ConfigError(f"Unknown configuration key '{key}'")

        field_name, convert = KEYS[key]
        changes[field_name] = convert(text)

    return dataclasses.replace(base or ExperimentConfig(), **changes)
