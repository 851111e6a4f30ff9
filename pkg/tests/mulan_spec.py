"""Checks against the public Mulan benchmark files.

The files are not shipped. Point ``LDFM_MULAN_DIR`` at a directory holding
``<name>-train.arff``, ``<name>-test.arff`` and ``<name>.xml`` for emotions,
scene, reference and computers; without it this module defines no examples.
"""

import os
from pathlib import Path

import numpy as np
from expects import be_above, be_above_or_equal, be_below, equal, expect
from mamba import description, it

from ldfm.config import ExperimentConfig
from ldfm.datasets import load_mulan_pair
from ldfm.experiments import prepare, run_feature_curve, run_missing_labels, run_reconstruction
from ldfm.model import LdfmConfig, fit

MULAN_DIR = os.environ.get('LDFM_MULAN_DIR')


def mulan_files(name: str):
    directory = Path(MULAN_DIR)

    return (
        str(directory / f'{name}-train.arff'),
        str(directory / f'{name}-test.arff'),
        str(directory / f'{name}.xml'),
    )


def mulan_config(name: str, **changes) -> ExperimentConfig:
    train, test, xml = mulan_files(name)

    return ExperimentConfig(train_path=train, test_path=test, labels_xml=xml, name=name, **changes)


def precision_by_count(record, method: str):
    return {point.feature_count: point.report.average_precision for point in record.points if point.method == method}


if MULAN_DIR:
    with description('Mulan datasets') as self:
        with it('loads the published dimensions'):
            for name, n_train, n_test, n_features, n_labels in (
                ('emotions', 391, 202, 72, 6),
                ('scene', 1211, 1196, 294, 6),
                ('reference', 2000, 3000, 793, 33),
                ('computers', 2000, 3000, 681, 33),
            ):
                pair = load_mulan_pair(*mulan_files(name))
                shape = (pair.train.n_instances, pair.test.n_instances, pair.train.n_features, pair.train.n_labels)

                expect(shape).to(equal((n_train, n_test, n_features, n_labels)))

        with it('converges within fifteen iterations on emotions'):
            prepared = prepare(mulan_config('emotions'))
            config = LdfmConfig(lambda_=1.0, max_iterations=30, objective_tolerance=0.0)

            trace = np.array(fit(prepared.train.features, prepared.train.labels, config).objective_trace)
            changes = np.abs(np.diff(trace)) / trace[:-1]

            expect(float(changes[14])).to(be_below(1e-3))

    with description('Mulan decoder errors') as self:
        with it('reconstructs better from learned labels on every dataset'):
            for name in ('emotions', 'scene', 'reference', 'computers'):
                errors = run_reconstruction(mulan_config(name)).reconstruction

                expect(errors['predicted']).to(be_below(errors['logical']))

        with it('lands near the published values on scene and emotions'):
            for name, expected in (('scene', (0.042, 0.032, 0.043)), ('emotions', (0.087, 0.022, 0.086))):
                errors = run_reconstruction(mulan_config(name)).reconstruction
                found = (errors['logical'], errors['predicted'], errors['testing'])

                expect(float(np.max(np.abs(np.array(found) - expected)))).to(be_below(0.03))

    with description('Mulan feature curves') as self:
        with it('improves with the number of selected features on scene'):
            record = run_feature_curve(mulan_config('scene', pca_variance=0.0, seeds=tuple(range(10))))
            curve = precision_by_count(record, 'ldfm')
            random = precision_by_count(record, 'random')

            expect(curve[100]).to(be_above(curve[10]))
            expect(curve[100]).to(be_above(random[100]))
            expect(curve[100]).to(be_above_or_equal(0.95 * max(curve.values())))

    with description('Mulan missing labels') as self:
        with it('keeps LDFM at or above the base arm'):
            for name in ('scene', 'emotions'):
                config = mulan_config(name, seeds=tuple(range(5)), missing_proportions=(0.2, 0.4, 0.6))
                points = run_missing_labels(config).points
                scores = {(point.method, point.missing_proportion): point.report.average_precision for point in points}

                for proportion in (0.2, 0.4, 0.6):
                    expect(scores[('ldfm', proportion)]).to(be_above_or_equal(scores[('base', proportion)]))

                if name == 'scene':
                    expect(scores[('ldfm', 0.2)]).to(be_above_or_equal(0.70))
