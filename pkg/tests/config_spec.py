"""Unit testing of the experiment configuration."""

from expects import be_none, equal, expect, raise_error
from mamba import context, description, it

from ldfm.config import (
    DEFAULT_ITERATION_GRID,
    DEFAULT_LAMBDA_GRID,
    ExperimentConfig,
    build_config,
    parse_bool,
    parse_config_text,
    parse_counts,
    parse_floats,
    read_config_file,
)
from ldfm.errors import ConfigError, ConfigValueError, DatasetIOError
from ldfm.model import LdfmConfig
from tests.helpers import temp_dir

with description('ExperimentConfig') as self:
    with it('has the published defaults'):
        config = ExperimentConfig()

        expect(config.lambda_).to(equal(1.0))
        expect(config.max_iterations).to(equal(100))
        expect(config.pca_variance).to(equal(0.95))
        expect(config.feature_counts).to(equal(tuple(range(1, 101))))
        expect(config.k_neighbors).to(equal(10))
        expect(config.lambda_grid).to(equal(DEFAULT_LAMBDA_GRID))
        expect(config.iteration_grid).to(equal(DEFAULT_ITERATION_GRID))
        expect(config.missing_feature_count).to(be_none)

    with it('stores sequences as tuples'):
        expect(ExperimentConfig(seeds=[3, 4]).seeds).to(equal((3, 4)))

    with it('builds the optimizer parameters'):
        config = ExperimentConfig(lambda_=0.4, max_iterations=20, objective_tolerance=0.0)

        expect(config.ldfm_config()).to(equal(LdfmConfig(lambda_=0.4, max_iterations=20, objective_tolerance=0.0)))

    with it('restores itself from a snapshot'):
        config = ExperimentConfig(train_path='a.arff', feature_counts=(1, 5, 9), output_format='json')

        snapshot = config.snapshot()

        expect(snapshot['feature_counts']).to(equal([1, 5, 9]))
        expect(ExperimentConfig.from_snapshot(snapshot)).to(equal(config))

    with it('rejects unknown snapshot fields'):
        expect(lambda: ExperimentConfig.from_snapshot({'colour': 'red'})).to(raise_error(ConfigError))

    with context('when values are invalid'):
        with it('reports every failing rule'):
            expect(lambda: ExperimentConfig(lambda_=-1.0, workers=0)).to(
                raise_error(ConfigValueError, "ExperimentConfig: rules ['lambda-positive', 'workers-positive'] fail"))

        with it('requires ascending feature counts'):
            expect(lambda: ExperimentConfig(feature_counts=(5, 3))).to(raise_error(ConfigValueError))

        with it('requires proportions in the unit interval'):
            expect(lambda: ExperimentConfig(missing_proportions=(0.2, 1.2))).to(raise_error(ConfigValueError))

        with it('requires a known output format'):
            expect(lambda: ExperimentConfig(output_format='xml')).to(raise_error(ConfigValueError))

        with it('requires the dataset paths before running'):
            expect(lambda: ExperimentConfig(train_path='a.arff').require_dataset()).to(
                raise_error(ConfigValueError, '--train, --test and --labels-xml are required'))

with description('value parsers') as self:
    with it('reads count ranges and lists'):
        expect(parse_counts('1..5')).to(equal((1, 2, 3, 4, 5)))
        expect(parse_counts('1..3, 10,20')).to(equal((1, 2, 3, 10, 20)))

    with it('rejects malformed counts'):
        expect(lambda: parse_counts('1..x')).to(raise_error(ConfigError))

    with it('reads number lists'):
        expect(parse_floats('0.2, 0.4,0.6')).to(equal((0.2, 0.4, 0.6)))
        expect(lambda: parse_floats('0.2,abc')).to(raise_error(ConfigError))

    with it('reads booleans'):
        expect(parse_bool('Yes')).to(equal(True))
        expect(parse_bool('off')).to(equal(False))
        expect(lambda: parse_bool('maybe')).to(raise_error(ConfigError))

with description('config files') as self:
    with it('skips comments and blank lines'):
        text = '# experiment\n\nlambda = 0.5   # weight\nfeatures = 1..3\n'

        expect(parse_config_text(text)).to(equal({'lambda': '0.5', 'features': '1..3'}))

    with it('rejects lines without a value'):
        expect(lambda: parse_config_text('lambda 0.5\n')).to(
            raise_error(ConfigError, "Config line 1: expected 'key = value'"))

    with it('rejects unknown keys'):
        expect(lambda: parse_config_text('colour = red\n')).to(
            raise_error(ConfigError, "Config line 1: unknown key 'colour'"))

    with it('converts values onto the defaults'):
        config = build_config({'lambda': '0.5', 'seed': '7', 'missing': '0.2,0.4', 'random-baseline': 'false'})

        expect(config.lambda_).to(equal(0.5))
        expect(config.seeds).to(equal((7,)))
        expect(config.missing_proportions).to(equal((0.2, 0.4)))
        expect(config.random_baseline).to(equal(False))
        expect(config.max_iterations).to(equal(100))

    with it('applies values on top of a base config'):
        base = ExperimentConfig(lambda_=0.8, k_neighbors=5)

        config = build_config({'max-iter': '10'}, base)

        expect((config.lambda_, config.k_neighbors, config.max_iterations)).to(equal((0.8, 5, 10)))

    with it('rejects values of the wrong type'):
        expect(lambda: build_config({'max-iter': 'ten'})).to(raise_error(ConfigError))

    with it('reads a file from disk'):
        path = temp_dir() / 'experiment.conf'
        path.write_text('out = results/emotions\nformat = json\n')

        expect(read_config_file(path)).to(equal({'out': 'results/emotions', 'format': 'json'}))

    with it('reports unreadable files'):
        expect(lambda: read_config_file(temp_dir() / 'missing.conf')).to(raise_error(DatasetIOError))
