"""Shared builders for the specs."""

import tempfile
from pathlib import Path

import numpy as np

from ldfm.datasets import MultiLabelDataset, dump_arff
from ldfm.model import objective


def max_abs(first, second) -> float:
    return float(np.max(np.abs(np.asarray(first) - np.asarray(second)))) if np.size(first) else 0.0


def random_psd(rng: np.random.Generator, size: int) -> np.ndarray:
    factor = rng.standard_normal((size, size + 2))

    return factor @ factor.T


def random_problem(rng: np.random.Generator, d: int, n: int, k: int):
    """Features d x n and binary labels k x n where every label has a positive."""

    features = rng.standard_normal((d, n))
    labels = (rng.random((k, n)) < 0.4).astype(float)
    labels[np.arange(k), np.arange(k) % n] = 1.0

    return features, labels


def numeric_gradient(function, point: np.ndarray, step: float = 1e-6) -> np.ndarray:
    """Central finite differences of a scalar function of a matrix."""

    gradient = np.zeros_like(point)

    for index in np.ndindex(*point.shape):
        forward = point.copy()
        backward = point.copy()
        forward[index] += step
        backward[index] -= step
        gradient[index] = (function(forward) - function(backward)) / (2.0 * step)

    return gradient


def objective_in_w(y_numeric, features, lambda_):
    return lambda w: objective(w, y_numeric, features, lambda_)


def objective_in_y(w, features, lambda_):
    return lambda y_numeric: objective(w, y_numeric, features, lambda_)


LABEL_HEADER = """<?xml version="1.0" encoding="utf-8"?>
<labels xmlns="http://mulan.sourceforge.net/labels">
{labels}
</labels>
"""


def label_header(names) -> str:
    return LABEL_HEADER.format(labels='\n'.join(f'<label name="{name}"></label>' for name in names))


def synthetic_split(rng: np.random.Generator, n: int, d: int = 6, k: int = 3) -> MultiLabelDataset:
    """Labels driven by the first k features, so that feature ranking matters."""

    features = rng.standard_normal((d, n))
    labels = (features[:k] + 0.3 * rng.standard_normal((k, n)) > 0.2).astype(float)
    labels[np.arange(k), np.arange(k)] = 1.0

    return MultiLabelDataset(
        features=features,
        labels=labels,
        feature_names=[f'f{index}' for index in range(d)],
        label_names=[f'l{index}' for index in range(k)],
    )


def write_mulan_files(directory: Path, name: str = 'toy', seed: int = 7, n_train: int = 40, n_test: int = 20):
    """Write <name>-train.arff, <name>-test.arff and <name>.xml; return the three paths."""

    rng = np.random.default_rng(seed)
    train = synthetic_split(rng, n_train)
    test = synthetic_split(rng, n_test)

    paths = (directory / f'{name}-train.arff', directory / f'{name}-test.arff', directory / f'{name}.xml')
    paths[0].write_text(dump_arff(train, name))
    paths[1].write_text(dump_arff(test, name))
    paths[2].write_text(label_header(train.label_names))

    return tuple(str(path) for path in paths)


def temp_dir() -> Path:
    return Path(tempfile.mkdtemp(prefix='ldfm-spec-'))
