"""Command line harness for the LDFM experiment suites.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import experiments
from .config import ExperimentConfig, build_config, read_config_file
from .errors import ConfigError, DataError, DatasetError, DatasetIOError, LdfmError, NumericalError
from .metrics import friedman_test

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

# dest -> config key, for every flag mirrored by the config file
_FLAG_KEYS = {
    'train': 'train',
    'test': 'test',
    'labels_xml': 'labels-xml',
    'name': 'name',
    'lambda_': 'lambda',
    'max_iter': 'max-iter',
    'tolerance': 'tolerance',
    'pca_variance': 'pca-variance',
    'standardize': 'standardize',
    'features': 'features',
    'seed': 'seed',
    'seeds': 'seeds',
    'missing': 'missing',
    'missing_features': 'missing-features',
    'lambda_grid': 'lambda-grid',
    'iter_grid': 'iter-grid',
    'k_neighbors': 'k-neighbors',
    'smoothing': 'smoothing',
    'random_baseline': 'random-baseline',
    'out': 'out',
    'format': 'format',
    'workers': 'workers',
}

_RUNNERS = {
    experiments.FEATURE_CURVE: experiments.run_feature_curve,
    experiments.RECONSTRUCT: experiments.run_reconstruction,
    experiments.MISSING_LABELS: experiments.run_missing_labels,
}


class _UsageParser(argparse.ArgumentParser):
    """Parser that raises instead of exiting, so main() owns the exit code."""

    def error(self, message):
        raise ConfigError(message)


def _experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', help='flat key = value file; flags override its values')
    parser.add_argument('--train', help='Mulan ARFF training file')
    parser.add_argument('--test', help='Mulan ARFF test file')
    parser.add_argument('--labels-xml', dest='labels_xml', help='Mulan XML label header')
    parser.add_argument('--name', help='dataset name used in results (default: train file stem)')
    parser.add_argument('--lambda', dest='lambda_', help='encoder term weight (default 1.0)')
    parser.add_argument('--max-iter', dest='max_iter', help='maximum alternating iterations (default 100)')
    parser.add_argument('--tolerance', help='relative objective plateau to stop at, 0 disables (default 1e-6)')
    parser.add_argument('--pca-variance', dest='pca_variance', help='retained PCA variance, 0 disables PCA (default 0.95)')
    parser.add_argument('--standardize', help='standardize features before PCA (true/false)')
    parser.add_argument('--features', help="feature counts, comma list or range such as '1..100'")
    parser.add_argument('--seed', help='single seed')
    parser.add_argument('--seeds', help='comma list or range of seeds')
    parser.add_argument('--missing', help='comma list of missing label proportions')
    parser.add_argument('--missing-features', dest='missing_features', help='feature count of the missing label study')
    parser.add_argument('--lambda-grid', dest='lambda_grid', help='comma list of lambda values for sweep')
    parser.add_argument('--iter-grid', dest='iter_grid', help='comma list or range of max iterations for sweep')
    parser.add_argument('--k-neighbors', dest='k_neighbors', help='ML-KNN neighborhood size (default 10)')
    parser.add_argument('--smoothing', help='ML-KNN Laplace smoothing (default 1.0)')
    parser.add_argument('--random-baseline', dest='random_baseline', help='evaluate random feature orders (true/false)')
    parser.add_argument('--out', help='output directory (default results)')
    parser.add_argument('--format', choices=('csv', 'json'), help='results table format (default csv)')
    parser.add_argument('--workers', help='threads for sweep points (default 1)')


def build_parser() -> argparse.ArgumentParser:
    parser = _UsageParser(prog='ldfm', description='LDFM multi-label feature selection experiments')
    parser.add_argument('--log-level', default='INFO', choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'))
    commands = parser.add_subparsers(dest='command', parser_class=_UsageParser)
    commands.required = True

    for name, description in (
        (experiments.FEATURE_CURVE, 'metrics of ML-KNN on the top ranked features'),
        (experiments.RECONSTRUCT, 'decoder reconstruction errors'),
        (experiments.MISSING_LABELS, 'Base against LDFM with removed training labels'),
        (experiments.SWEEP, 'feature curves over the lambda and iteration grids'),
    ):
        _experiment_flags(commands.add_parser(name, help=description))

    friedman = commands.add_parser('friedman', help='Friedman test over a methods x datasets CSV table')
    friedman.add_argument('table', help='CSV with a header row; first column method name, one column per dataset')
    friedman.add_argument('--lower-is-better', action='store_true', help='negate values, e.g. for hamming loss')

    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Merge the config file (if any) with the flags given on the command line."""

    values: Dict[str, str] = {}

    if args.config:
        values.update(read_config_file(args.config))

    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest, None)

        if value is not None:
            values[key] = value

    return build_config(values)


def _read_table(path: str):
    try:
        with Path(path).open(newline='', encoding='utf-8') as handle:
            rows = [row for row in csv.reader(handle) if row]
    except OSError as error:
        raise DatasetIOError(f"Can't read '{path}': {error}") from error

    if len(rows) < 2:
        raise ConfigError(f"'{path}' needs a header row and at least one method row")

    for number, row in enumerate(rows[1:], start=2):
        if len(row) != len(rows[0]):
            raise DatasetError(f"'{path}' row {number} has {len(row)} cells, the header has {len(rows[0])}")

    try:
        values = np.array([[float(cell) for cell in row[1:]] for row in rows[1:]])
    except ValueError as error:
        raise ConfigError(f"'{path}' contains non numeric values") from error

    return [row[0] for row in rows[1:]], values


def _run_friedman(args: argparse.Namespace) -> None:
    methods, values = _read_table(args.table)
    result = friedman_test(-values if args.lower_is_better else values)

    print(f'statistic {result.statistic:.6g}')
    print(f'p_value {result.p_value:.6g}')

    for method, rank in zip(methods, result.average_ranks):
        print(f'rank {method} {rank:.4g}')


def _run_experiment(command: str, config: ExperimentConfig) -> List[Path]:
    if command == experiments.SWEEP:
        records = experiments.run_sweep(config)
    else:
        records = [_RUNNERS[command](config)]

    return experiments.emit_results(records, config.output_dir, config.output_format, experiment=command)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as error:
        print(f'ldfm: error: {error}', file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=args.log_level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        if args.command == 'friedman':
            _run_friedman(args)
        else:
            for path in _run_experiment(args.command, config_from_args(args)):
                logger.info(f'Wrote {path}')
    except ConfigError as error:
        logger.error(str(error))
        return EXIT_USAGE
    except DataError as error:
        logger.error(str(error))
        return EXIT_DATA
    except NumericalError as error:
        logger.error(str(error))
        return EXIT_NUMERICAL
    except LdfmError as error:
        logger.error(str(error))
        return EXIT_DATA

    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
