"""Experiment suites: feature curves, reconstruction errors, missing labels and parameter sweeps."""

import csv
import itertools
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from .config import ExperimentConfig
from .datasets import MultiLabelDataset, corrupt_labels, load_mulan_pair
from .errors import DatasetIOError, OutOfRangeError
from .metrics import MetricsReport, evaluate
from .mlknn import mlknn_predict, mlknn_train
from .model import constrained_objective, fit, rank_features, reconstruction_error
from .preprocess import PcaModel, apply_pca, fit_pca

logger = logging.getLogger(__name__)

FEATURE_CURVE = 'feature-curve'
RECONSTRUCT = 'reconstruct'
MISSING_LABELS = 'missing-labels'
SWEEP = 'sweep'

EVALUATION_COLUMNS = (
    'run_id', 'dataset', 'method', 'lambda', 'max_iterations', 'missing_proportion', 'feature_count',
    'hamming_loss', 'average_precision', 'micro_f1',
)
RECONSTRUCTION_COLUMNS = ('run_id', 'dataset', 'logical_error', 'predicted_error', 'testing_error')
CONVERGENCE_COLUMNS = ('run_id', 'dataset', 'lambda', 'max_iterations', 'iteration', 'objective')

BASE_ARM = 'W fitted with Y~ frozen at the corrupted logical training labels; only the W update is iterated'


@dataclass(frozen=True)
class EvaluationPoint:
    """ML-KNN metrics of one feature selection at one feature count."""

    method: str
    feature_count: int
    report: MetricsReport
    missing_proportion: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'method': self.method,
            'feature_count': self.feature_count,
            'missing_proportion': self.missing_proportion,
            **self.report.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EvaluationPoint':
        return cls(
            method=data['method'],
            feature_count=int(data['feature_count']),
            missing_proportion=float(data['missing_proportion']),
            report=MetricsReport(
                hamming_loss=data['hamming_loss'],
                average_precision=data['average_precision'],
                micro_f1=data['micro_f1'],
            ),
        )


@dataclass
class RunRecord:
    """Outcome of one experiment run.

    ``wall_time`` is the only field that changes between identical runs; it is
    written under the ``volatile`` key.
    """

    run_id: str
    experiment: str
    dataset: str
    config: Dict[str, Any]
    seeds: List[int]
    points: List[EvaluationPoint] = field(default_factory=list)
    reconstruction: Dict[str, float] = field(default_factory=dict)
    objective_trace: List[float] = field(default_factory=list)
    metadata: Dict[str, str] = field(default_factory=dict)
    wall_time: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'run_id': self.run_id,
            'experiment': self.experiment,
            'dataset': self.dataset,
            'config': self.config,
            'seeds': list(self.seeds),
            'points': [point.to_dict() for point in self.points],
            'reconstruction': dict(self.reconstruction),
            'objective_trace': list(self.objective_trace),
            'metadata': dict(self.metadata),
            'volatile': {'wall_time': self.wall_time},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunRecord':
        return cls(
            run_id=data['run_id'],
            experiment=data['experiment'],
            dataset=data['dataset'],
            config=data['config'],
            seeds=list(data['seeds']),
            points=[EvaluationPoint.from_dict(point) for point in data['points']],
            reconstruction=dict(data['reconstruction']),
            objective_trace=list(data['objective_trace']),
            metadata=dict(data['metadata']),
            wall_time=data.get('volatile', {}).get('wall_time', 0.0),
        )


@dataclass(frozen=True)
class PreparedData:
    """Train and test splits after the optional PCA step."""

    name: str
    train: MultiLabelDataset
    test: MultiLabelDataset
    pca: Optional[PcaModel] = None


def prepare(config: ExperimentConfig) -> PreparedData:
    """Load the dataset pair and, unless ``pca_variance`` is 0, project both splits on train PCA."""

    config.require_dataset()
    pair = load_mulan_pair(config.train_path, config.test_path, config.labels_xml, name=config.name)

    if config.pca_variance == 0.0:
        return PreparedData(pair.name, pair.train, pair.test)

    pca = fit_pca(pair.train.features, config.pca_variance, standardize=config.standardize)
    names = [f'pc{index + 1}' for index in range(pca.n_components)]

    return PreparedData(
        name=pair.name,
        train=pair.train.with_features(apply_pca(pca, pair.train.features), names),
        test=pair.test.with_features(apply_pca(pca, pair.test.features), names),
        pca=pca,
    )


def resolve_feature_counts(counts: Sequence[int], dimension: int) -> List[int]:
    """Drop counts above the available dimension; the dimension itself replaces them."""

    kept = [count for count in counts if count <= dimension]

    if len(kept) < len(counts):
        logger.warning(f'Feature counts above {dimension} available features were clipped')

        if not kept or kept[-1] != dimension:
            kept.append(dimension)

    return kept


def evaluate_selection(
    train: MultiLabelDataset,
    test: MultiLabelDataset,
    indices: Sequence[int],
    config: ExperimentConfig,
) -> MetricsReport:
    """Train ML-KNN on the selected train features and score the same features of the test split."""

    indices = list(indices)
    train, test = train.select_features(indices), test.select_features(indices)
    classifier = mlknn_train(train.features, train.labels, config.k_neighbors, config.smoothing)
    scores, predictions = mlknn_predict(classifier, test.features)

    return evaluate(scores, predictions, test.labels)


def _run_id(experiment: str, dataset: str, config: ExperimentConfig, **extra) -> str:
    parts = [experiment, dataset, f'lambda={config.lambda_:g}', f'iter={config.max_iterations}']
    parts.extend(f'{key}={value}' for key, value in sorted(extra.items()))

    return ':'.join(parts)


def _random_points(prepared: PreparedData, counts: Sequence[int], config: ExperimentConfig) -> List[EvaluationPoint]:
    orders = [np.random.default_rng(seed).permutation(prepared.train.n_features) for seed in config.seeds]
    points = []

    for count in counts:
        reports = [evaluate_selection(prepared.train, prepared.test, order[:count], config) for order in orders]
        points.append(EvaluationPoint('random', count, MetricsReport.average(reports)))

    return points


def run_feature_curve(config: ExperimentConfig, prepared: Optional[PreparedData] = None) -> RunRecord:
    """Rank features with LDFM and evaluate ML-KNN on the top m of them for every configured m.

    With ``random_baseline`` the same counts are also evaluated on seeded
    random feature orders, averaged over seeds, as method ``random``.
    """

    started = time.perf_counter()
    prepared = prepared or prepare(config)
    train, test = prepared.train, prepared.test

    model = fit(train.features, train.labels, config.ldfm_config())
    ranking = [index for index, _ in rank_features(model)]
    counts = resolve_feature_counts(config.feature_counts, train.n_features)

    points = [
        EvaluationPoint('ldfm', count, evaluate_selection(train, test, ranking[:count], config))
        for count in counts
    ]

    if config.random_baseline:
        points.extend(_random_points(prepared, counts, config))

    logger.info(f"Feature curve on '{prepared.name}' (lambda={config.lambda_:g}) done, {len(counts)} counts")

    return RunRecord(
        run_id=_run_id(FEATURE_CURVE, prepared.name, config),
        experiment=FEATURE_CURVE,
        dataset=prepared.name,
        config=config.snapshot(),
        seeds=list(config.seeds),
        points=points,
        objective_trace=list(model.objective_trace),
        metadata={'ranking': ' '.join(str(index) for index in ranking)},
        wall_time=time.perf_counter() - started,
    )


def run_reconstruction(config: ExperimentConfig, prepared: Optional[PreparedData] = None) -> RunRecord:
    """Decoder errors with logical train labels, learned train labels and logical test labels."""

    started = time.perf_counter()
    prepared = prepared or prepare(config)
    train, test = prepared.train, prepared.test

    model = fit(train.features, train.labels, config.ldfm_config())
    errors = {
        'logical': reconstruction_error(train.features, model.w, train.labels),
        'predicted': reconstruction_error(train.features, model.w, model.y_numeric),
        'testing': reconstruction_error(test.features, model.w, test.labels),
    }

    if errors['predicted'] > errors['logical']:
        logger.warning(f"'{prepared.name}': learned labels reconstruct worse than logical labels")

    logger.info(
        f"Reconstruction on '{prepared.name}': logical {errors['logical']:.4f}, "
        f"predicted {errors['predicted']:.4f}, testing {errors['testing']:.4f}")

    return RunRecord(
        run_id=_run_id(RECONSTRUCT, prepared.name, config),
        experiment=RECONSTRUCT,
        dataset=prepared.name,
        config=config.snapshot(),
        seeds=list(config.seeds),
        reconstruction=errors,
        objective_trace=list(model.objective_trace),
        metadata={
            'objective': f'{model.objective_trace[-1]:.17g}',
            'constrained_objective': f'{constrained_objective(model.w, train.features):.17g}',
        },
        wall_time=time.perf_counter() - started,
    )


def run_missing_labels(config: ExperimentConfig, prepared: Optional[PreparedData] = None) -> RunRecord:
    """Compare the Base arm with full LDFM on training labels with positives removed.

    Only training labels are corrupted; test labels stay the ground truth.
    Each proportion is averaged over the configured seeds.
    """

    if not config.missing_proportions:
        raise OutOfRangeError('At least one missing label proportion is required')

    started = time.perf_counter()
    prepared = prepared or prepare(config)
    train, test = prepared.train, prepared.test
    ldfm_config = config.ldfm_config()

    wanted = config.missing_feature_count or config.feature_counts[-1]
    count = resolve_feature_counts([wanted], train.n_features)[-1]
    points = []

    for proportion in config.missing_proportions:
        arms: Dict[str, List[MetricsReport]] = {'base': [], 'ldfm': []}

        for seed in config.seeds:
            corrupted = corrupt_labels(train, proportion, seed)

            for method, frozen in (('base', True), ('ldfm', False)):
                model = fit(corrupted.features, corrupted.labels, ldfm_config, freeze_labels=frozen)
                ranking = [index for index, _ in rank_features(model)]
                arms[method].append(evaluate_selection(corrupted, test, ranking[:count], config))

        for method, reports in arms.items():
            points.append(EvaluationPoint(method, count, MetricsReport.average(reports), proportion))

        logger.info(f"Missing labels on '{prepared.name}': proportion {proportion:g} done")

    return RunRecord(
        run_id=_run_id(MISSING_LABELS, prepared.name, config, features=count),
        experiment=MISSING_LABELS,
        dataset=prepared.name,
        config=config.snapshot(),
        seeds=list(config.seeds),
        points=points,
        metadata={'base_arm': BASE_ARM, 'corruption': 'training labels only'},
        wall_time=time.perf_counter() - started,
    )


def run_sweep(config: ExperimentConfig, prepared: Optional[PreparedData] = None) -> List[RunRecord]:
    """Feature curve for every (lambda, max_iterations) pair of the grids, in grid order."""

    prepared = prepared or prepare(config)
    grid = [
        config.replace(lambda_=lambda_, max_iterations=iterations)
        for lambda_, iterations in itertools.product(config.lambda_grid, config.iteration_grid)
    ]

    def run_point(point: ExperimentConfig) -> RunRecord:
        record = run_feature_curve(point, prepared)
        record.run_id = _run_id(SWEEP, prepared.name, point)
        record.experiment = SWEEP

        return record

    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        return list(executor.map(run_point, grid))


def _evaluation_rows(record: RunRecord) -> List[List[Any]]:
    return [
        [
            record.run_id, record.dataset, point.method, record.config['lambda_'], record.config['max_iterations'],
            point.missing_proportion, point.feature_count, point.report.hamming_loss,
            point.report.average_precision, point.report.micro_f1,
        ]
        for point in record.points
    ]


def _convergence_rows(record: RunRecord) -> List[List[Any]]:
    return [
        [record.run_id, record.dataset, record.config['lambda_'], record.config['max_iterations'], iteration, value]
        for iteration, value in enumerate(record.objective_trace, start=1)
    ]


def _write_csv(path: Path, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        writer.writerows(rows)

    return path


def emit_results(
    records: Sequence[RunRecord],
    output_dir: Union[str, Path],
    output_format: str = 'csv',
    experiment: Optional[str] = None,
) -> List[Path]:
    """Write the results table and the plot data files of one experiment.

    Files, named after the experiment:

    * ``<experiment>.csv``: one row per evaluation point (``EVALUATION_COLUMNS``),
      or ``<experiment>.json``: the full records, with ``volatile`` wall times.
    * ``<experiment>_curve.csv``: feature count vs metrics, JSON format only
      (the CSV table already is the curve).
    * ``<experiment>_convergence.csv``: iteration vs objective, when traces exist.
    * ``<experiment>_reconstruction.csv``: decoder errors, when recorded.

    :raises DatasetIOError: When the directory or a file can't be written
    :raises OutOfRangeError: For an unknown format
    """

    if output_format not in ('csv', 'json'):
        raise OutOfRangeError(f"Unknown output format '{output_format}'")

    experiment = experiment or (records[0].experiment if records else 'results')
    directory = Path(output_dir)
    evaluation = [row for record in records for row in _evaluation_rows(record)]
    written = []

    try:
        directory.mkdir(parents=True, exist_ok=True)

        if output_format == 'csv':
            written.append(_write_csv(directory / f'{experiment}.csv', EVALUATION_COLUMNS, evaluation))
        else:
            path = directory / f'{experiment}.json'
            path.write_text(json.dumps([record.to_dict() for record in records], indent=2, sort_keys=True) + '\n')
            written.append(path)

            if evaluation:
                written.append(_write_csv(directory / f'{experiment}_curve.csv', EVALUATION_COLUMNS, evaluation))

        convergence = [row for record in records for row in _convergence_rows(record)]

        if convergence:
            written.append(_write_csv(directory / f'{experiment}_convergence.csv', CONVERGENCE_COLUMNS, convergence))

        reconstruction = [
            [record.run_id, record.dataset] + [record.reconstruction[key] for key in ('logical', 'predicted', 'testing')]
            for record in records if record.reconstruction
        ]

        if reconstruction:
            written.append(
                _write_csv(directory / f'{experiment}_reconstruction.csv', RECONSTRUCTION_COLUMNS, reconstruction))
    except OSError as error:
        raise DatasetIOError(f"Can't write results to '{directory}': {error}") from error

    return written


def load_records(path: Union[str, Path]) -> List[RunRecord]:
    """Read records back from a JSON results table."""

    try:
        data = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, ValueError) as error:
        raise DatasetIOError(f"Can't read records from '{path}': {error}") from error

    return [RunRecord.from_dict(item) for item in data]
