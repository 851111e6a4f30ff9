"""Unit testing of the evaluation metrics and the Friedman test."""

import numpy as np
from expects import be_above, be_below, equal, expect, raise_error
from mamba import description, it

from ldfm.errors import ShapeMismatchError, TooFewSamplesError
from ldfm.metrics import MetricsReport, average_precision, evaluate, friedman_test, hamming_loss, micro_f1

with description('hamming_loss') as self:
    with it('is zero for a perfect prediction'):
        truth = np.array([[1.0, 0.0], [0.0, 1.0]])

        expect(hamming_loss(truth, truth)).to(equal(0.0))

    with it('is one when every entry is flipped'):
        truth = np.array([[1.0, 0.0], [0.0, 1.0]])

        expect(hamming_loss(1.0 - truth, truth)).to(equal(1.0))

    with it('counts a single error out of four'):
        expect(hamming_loss([[1.0, 0.0], [1.0, 1.0]], [[1.0, 0.0], [0.0, 1.0]])).to(equal(0.25))

    with it('adds up to one with the complementary prediction'):
        rng = np.random.default_rng(1)
        predictions = (rng.random((4, 9)) < 0.5).astype(float)
        truth = (rng.random((4, 9)) < 0.5).astype(float)

        expect(abs(hamming_loss(predictions, truth) + hamming_loss(1.0 - predictions, truth) - 1.0)).to(
            be_below(1e-15))

    with it('rejects different shapes'):
        expect(lambda: hamming_loss(np.zeros((2, 2)), np.zeros((2, 3)))).to(raise_error(ShapeMismatchError))

with description('average_precision') as self:
    with it('is one when relevant labels are ranked first'):
        truth = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
        scores = np.array([[0.9, 0.1], [0.2, 0.8], [0.7, 0.3]])

        expect(average_precision(scores, truth)).to(equal(1.0))

    with it('is one half for a single relevant label ranked second'):
        expect(average_precision([[0.2], [0.9]], [[1.0], [0.0]])).to(equal(0.5))

    with it('is one when every label is relevant'):
        expect(average_precision([[0.3], [0.1]], [[1.0], [1.0]])).to(equal(1.0))

    with it('skips instances without relevant labels'):
        scores = np.array([[0.2, 0.5], [0.9, 0.1]])
        truth = np.array([[1.0, 0.0], [0.0, 0.0]])

        expect(average_precision(scores, truth)).to(equal(0.5))

    with it('is zero when no instance has relevant labels'):
        expect(average_precision(np.ones((2, 3)), np.zeros((2, 3)))).to(equal(0.0))

    with it('only depends on the score order'):
        rng = np.random.default_rng(2)
        scores = rng.random((5, 12))
        truth = (rng.random((5, 12)) < 0.4).astype(float)

        expect(abs(average_precision(scores, truth) - average_precision(np.exp(3.0 * scores), truth))).to(
            be_below(1e-15))

with description('micro_f1') as self:
    with it('is one for a perfect prediction'):
        truth = np.array([[1.0, 0.0], [0.0, 1.0]])

        expect(micro_f1(truth, truth)).to(equal(1.0))

    with it('is zero for all-zero predictions'):
        expect(micro_f1(np.zeros((2, 2)), np.eye(2))).to(equal(0.0))

    with it('pools counts over all pairs'):
        predictions = np.array([[1.0, 1.0, 1.0, 0.0]])
        truth = np.array([[1.0, 1.0, 0.0, 1.0]])

        expect(abs(micro_f1(predictions, truth) - 2 / 3)).to(be_below(1e-15))

    with it('is zero without positives anywhere'):
        expect(micro_f1(np.zeros((2, 3)), np.zeros((2, 3)))).to(equal(0.0))

    with it('does not depend on the instance order'):
        rng = np.random.default_rng(3)
        predictions = (rng.random((3, 10)) < 0.5).astype(float)
        truth = (rng.random((3, 10)) < 0.5).astype(float)
        order = rng.permutation(10)

        expect(abs(micro_f1(predictions, truth) - micro_f1(predictions[:, order], truth[:, order]))).to(
            be_below(1e-15))

with description('MetricsReport') as self:
    with it('evaluates the three metrics together'):
        truth = np.array([[1.0, 0.0], [0.0, 1.0]])

        report = evaluate(np.array([[0.9, 0.2], [0.1, 0.7]]), truth, truth)

        expect(report).to(equal(MetricsReport(hamming_loss=0.0, average_precision=1.0, micro_f1=1.0)))
        expect(list(report.to_dict())).to(equal(['hamming_loss', 'average_precision', 'micro_f1']))

    with it('averages reports field by field'):
        reports = [MetricsReport(0.1, 0.5, 0.4), MetricsReport(0.3, 0.7, 0.6)]

        average = MetricsReport.average(reports)

        expect(abs(average.hamming_loss - 0.2) + abs(average.average_precision - 0.6)).to(be_below(1e-15))
        expect(abs(average.micro_f1 - 0.5)).to(be_below(1e-15))

    with it('refuses to average nothing'):
        expect(lambda: MetricsReport.average([])).to(raise_error(TooFewSamplesError))

with description('friedman_test') as self:
    with it('finds no difference between identical methods'):
        result = friedman_test([[0.5, 0.6, 0.7], [0.5, 0.6, 0.7]])

        expect(result.statistic).to(equal(0.0))
        expect(result.p_value).to(equal(1.0))
        expect(result.average_ranks).to(equal((1.5, 1.5)))

    with it('computes the statistic of a consistent winner'):
        result = friedman_test([[0.9, 0.8, 0.7, 0.95], [0.5, 0.4, 0.3, 0.6]])

        expect(abs(result.statistic - 4.0)).to(be_below(1e-12))
        expect(result.average_ranks).to(equal((1.0, 2.0)))
        expect(result.p_value).to(be_below(0.05))

    with it('shares ranks between tied methods'):
        result = friedman_test([[0.7, 0.9], [0.7, 0.2], [0.1, 0.5]])

        expect(result.average_ranks).to(equal((1.25, 2.25, 2.5)))
        expect(result.p_value).to(be_above(0.0))

    with it('needs two methods and two datasets'):
        expect(lambda: friedman_test([[0.5, 0.6]])).to(raise_error(TooFewSamplesError))
        expect(lambda: friedman_test([[0.5], [0.6]])).to(raise_error(TooFewSamplesError))
