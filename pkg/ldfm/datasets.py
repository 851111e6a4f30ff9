"""Mulan multi-label datasets: ARFF data files plus an XML label header."""

import logging
import math
import re
import xml.etree.ElementTree as ElementTree
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    ArffSyntaxError,
    DatasetError,
    DatasetIOError,
    EmptyLabelSetError,
    MalformedXmlError,
    MissingValueError,
    NonBinaryLabelError,
    OutOfRangeError,
    SchemaMismatchError,
    UnknownLabelNameError,
)
from .linalg import as_matrix

logger = logging.getLogger(__name__)

Source = Union[bytes, str]

_NUMERIC_TYPES = ('numeric', 'real', 'integer')
_ATTRIBUTE = re.compile(r"@attribute\s+('(?:[^'\\]|\\.)*'|\"[^\"]*\"|\S+)\s+(.+)$", re.IGNORECASE)


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, dtype=np.float64)
    matrix.setflags(write=False)

    return matrix


@dataclass(frozen=True)
class MultiLabelDataset:
    """Feature matrix (d x n) with its logical label matrix (k x n).

    Instances are columns, as in the optimizer. Both matrices are read-only.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: Tuple[str, ...]
    label_names: Tuple[str, ...]

    def __post_init__(self):
        features = _frozen(as_matrix(self.features, 'features'))
        labels = _frozen(as_matrix(self.labels, 'labels'))
        object.__setattr__(self, 'features', features)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'feature_names', tuple(self.feature_names))
        object.__setattr__(self, 'label_names', tuple(self.label_names))

        if features.shape[0] != len(self.feature_names):
            raise DatasetError(f'{features.shape[0]} feature rows but {len(self.feature_names)} feature names')

        if labels.shape[0] != len(self.label_names):
            raise DatasetError(f'{labels.shape[0]} label rows but {len(self.label_names)} label names')

        if features.shape[1] != labels.shape[1]:
            raise DatasetError(f'{features.shape[1]} feature columns but {labels.shape[1]} label columns')

        if not np.all((labels == 0.0) | (labels == 1.0)):
            raise NonBinaryLabelError('Label entries must be exactly 0 or 1')

        for kind, names in (('feature', self.feature_names), ('label', self.label_names)):
            if len(set(names)) != len(names):
                raise DatasetError(f'Duplicated {kind} names')

    @property
    def n_features(self) -> int:
        return self.features.shape[0]

    @property
    def n_labels(self) -> int:
        return self.labels.shape[0]

    @property
    def n_instances(self) -> int:
        return self.features.shape[1]

    def select_features(self, indices: Sequence[int]) -> 'MultiLabelDataset':
        """Dataset restricted to the given feature rows, in the given order."""

        indices = list(indices)

        return MultiLabelDataset(
            features=self.features[indices, :],
            labels=self.labels,
            feature_names=[self.feature_names[index] for index in indices],
            label_names=self.label_names,
        )

    def with_features(self, features: np.ndarray, feature_names: Sequence[str]) -> 'MultiLabelDataset':
        return MultiLabelDataset(features, self.labels, feature_names, self.label_names)

    def with_labels(self, labels: np.ndarray) -> 'MultiLabelDataset':
        return MultiLabelDataset(self.features, labels, self.feature_names, self.label_names)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiLabelDataset):
            return NotImplemented

        return (
            self.feature_names == other.feature_names and self.label_names == other.label_names
            and np.array_equal(self.features, other.features) and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None


@dataclass(frozen=True)
class DatasetPair:
    """Train and test splits sharing one attribute schema."""

    train: MultiLabelDataset
    test: MultiLabelDataset
    name: str

    def __post_init__(self):
        if self.train.feature_names != self.test.feature_names:
            raise SchemaMismatchError(
                f"Dataset '{self.name}': train has {self.train.n_features} features, "
                f'test has {self.test.n_features} or a different order')

        if self.train.label_names != self.test.label_names:
            raise SchemaMismatchError(f"Dataset '{self.name}': train and test declare different labels")


@dataclass
class _Attribute:
    name: str
    nominal: Optional[List[str]]

    def convert(self, token: str, line: int, column: int) -> float:
        if token == '?':
            raise MissingValueError(f"Missing value for attribute '{self.name}' (line {line}, column {column})")

        try:
            return float(token)
        except ValueError:
            pass

        if self.nominal is not None and token in self.nominal:
            return float(self.nominal.index(token))

        raise ArffSyntaxError(f"Invalid value '{token}' for attribute '{self.name}'", line, column)


def _decode(text: Source) -> str:
    if isinstance(text, bytes):
        return text.decode('utf-8')

    return text


def _unquote(token: str) -> str:
    token = token.strip()

    if len(token) >= 2 and token[0] == token[-1] and token[0] in '\'"':
        return token[1:-1].replace("\\'", "'")

    return token


def _parse_attribute(line: str, number: int) -> _Attribute:
    match = _ATTRIBUTE.match(line.strip())

    if match is None:
        raise ArffSyntaxError('Malformed @attribute declaration', number)

    name = _unquote(match.group(1))
    kind = match.group(2).strip()

    if kind.startswith('{'):
        if not kind.endswith('}'):
            raise ArffSyntaxError(f"Unclosed nominal values for attribute '{name}'", number, len(line))

        return _Attribute(name, [_unquote(value) for value in kind[1:-1].split(',')])

    if kind.lower() in _NUMERIC_TYPES:
        return _Attribute(name, None)

    raise ArffSyntaxError(f"Unsupported type '{kind}' for attribute '{name}'", number, line.find(kind) + 1)


def _split_fields(line: str) -> List[Tuple[str, int]]:
    """Comma separated fields with their 1-based start column."""

    fields = []
    offset = 0

    for raw in line.split(','):
        stripped = raw.lstrip()
        fields.append((_unquote(raw), offset + len(raw) - len(stripped) + 1))
        offset += len(raw) + 1

    return fields


def _dense_row(line: str, number: int, attributes: List[_Attribute]) -> List[float]:
    fields = _split_fields(line)

    if len(fields) != len(attributes):
        raise ArffSyntaxError(f'Expected {len(attributes)} values, got {len(fields)}', number, len(line))

    return [attribute.convert(token, number, column) for attribute, (token, column) in zip(attributes, fields)]


def _sparse_row(line: str, number: int, attributes: List[_Attribute]) -> List[float]:
    body = line.strip()

    if not body.endswith('}'):
        raise ArffSyntaxError('Unclosed sparse row', number, len(line))

    row = [0.0] * len(attributes)
    start = line.index('{') + 1

    for token, column in _split_fields(body[1:-1]):
        if not token:
            continue

        parts = token.split(None, 1)

        if len(parts) != 2:
            raise ArffSyntaxError(f"Malformed sparse entry '{token}'", number, start + column)

        try:
            index = int(parts[0])
        except ValueError as error:
            raise ArffSyntaxError(f"Invalid sparse index '{parts[0]}'", number, start + column) from error

        if not 0 <= index < len(attributes):
            raise ArffSyntaxError(f'Sparse index {index} out of range', number, start + column)

        row[index] = attributes[index].convert(_unquote(parts[1]), number, start + column)

    return row


def parse_arff(text: Source, label_names: Sequence[str]) -> MultiLabelDataset:
    """Parse an ARFF document into a multi-label dataset.

    Attributes named in ``label_names`` become label rows in ``label_names``
    order; every other attribute becomes a feature row in file order. Dense
    and sparse ``@data`` rows may be mixed.

    :param text: ARFF document as bytes or str
    :param label_names: Names of the label attributes, from the XML header
    :return MultiLabelDataset: Parsed dataset
    :raises ArffSyntaxError: For malformed declarations or rows
    :raises UnknownLabelNameError: When a label is not declared as attribute
    :raises MissingValueError: When a '?' value is found
    :raises NonBinaryLabelError: When a label value is neither 0 nor 1
    """

    attributes: List[_Attribute] = []
    rows: List[List[float]] = []
    in_data = False

    for number, line in enumerate(_decode(text).splitlines(), start=1):
        stripped = line.strip()

        if not stripped or stripped.startswith('%'):
            continue

        if in_data:
            parser = _sparse_row if stripped.startswith('{') else _dense_row
            rows.append(parser(line, number, attributes))
            continue

        keyword = stripped.split(None, 1)[0].lower()

        if keyword == '@relation':
            continue

        if keyword == '@attribute':
            attributes.append(_parse_attribute(line, number))
        elif keyword == '@data':
            in_data = True
        else:
            raise ArffSyntaxError(f"Unexpected header line '{stripped[:40]}'", number)

    if not in_data:
        raise ArffSyntaxError('Missing @data section', max(_line_count(text), 1))

    positions: Dict[str, int] = {attribute.name: index for index, attribute in enumerate(attributes)}

    for name in label_names:
        if name not in positions:
            raise UnknownLabelNameError(f"Label '{name}' not declared in ARFF")

    label_rows = [positions[name] for name in label_names]
    label_set = set(label_rows)
    feature_rows = [index for index in range(len(attributes)) if index not in label_set]

    values = np.array(rows, dtype=np.float64).reshape((len(rows), len(attributes)))
    labels = values[:, label_rows].T

    if not np.all((labels == 0.0) | (labels == 1.0)):
        bad = int(np.argwhere((labels != 0.0) & (labels != 1.0))[0][0])
        raise NonBinaryLabelError(f"Label '{label_names[bad]}' has values other than 0 and 1")

    return MultiLabelDataset(
        features=values[:, feature_rows].T,
        labels=labels,
        feature_names=[attributes[index].name for index in feature_rows],
        label_names=list(label_names),
    )


def _line_count(text: Source) -> int:
    return len(_decode(text).splitlines())


def dump_arff(dataset: MultiLabelDataset, relation: str = 'ldfm') -> str:
    """Serialize a dataset as dense ARFF, features first and labels last."""

    def quote(name: str) -> str:
        return f"'{name}'" if re.search(r"[\s,{}%']", name) else name

    lines = [f'@relation {quote(relation)}', '']
    lines.extend(f'@attribute {quote(name)} numeric' for name in dataset.feature_names)
    lines.extend(f'@attribute {quote(name)} {{0,1}}' for name in dataset.label_names)
    lines.extend(['', '@data'])

    for column in range(dataset.n_instances):
        features = [f'{value:.17g}' for value in dataset.features[:, column]]
        labels = [str(int(value)) for value in dataset.labels[:, column]]
        lines.append(','.join(features + labels))

    return '\n'.join(lines) + '\n'


def _local_name(tag: str) -> str:
    return tag.rsplit('}', 1)[-1]


def parse_label_header(xml: Source) -> List[str]:
    """Label names of a Mulan XML header, in document order.

    Nested (hierarchical) labels are flattened.

    :raises MalformedXmlError: When the document can't be parsed or has no <labels> root
    :raises EmptyLabelSetError: When no <label> element is found
    """

    try:
        root = ElementTree.fromstring(xml)
    except ElementTree.ParseError as error:
        raise MalformedXmlError(f'Invalid label header: {error}') from error

    if _local_name(root.tag) != 'labels':
        raise MalformedXmlError(f"Label header root must be <labels>, got <{_local_name(root.tag)}>")

    names = []

    for element in root.iter():
        if _local_name(element.tag) != 'label':
            continue

        name = element.get('name')

        if name is None:
            raise MalformedXmlError('<label> element without name attribute')

        names.append(name)

    if not names:
        raise EmptyLabelSetError('Label header declares no labels')

    return names


def _read(path: Union[str, Path]) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as error:
        raise DatasetIOError(f"Can't read '{path}': {error}") from error


def dataset_name(train_path: Union[str, Path]) -> str:
    stem = Path(train_path).stem

    return re.sub(r'[-_]train$', '', stem)


def load_mulan_pair(train_path, test_path, xml_path, name: Optional[str] = None) -> DatasetPair:
    """Load a Mulan train/test pair sharing one XML label header.

    :raises DatasetIOError: When some file can't be read
    :raises SchemaMismatchError: When train and test declare different attributes
    """

    label_names = parse_label_header(_read(xml_path))
    train = parse_arff(_read(train_path), label_names)
    test = parse_arff(_read(test_path), label_names)
    name = name or dataset_name(train_path)

    logger.info(
        f"Loaded '{name}': d={train.n_features}, k={train.n_labels}, "
        f'n_train={train.n_instances}, n_test={test.n_instances}')

    return DatasetPair(train=train, test=test, name=name)


def corrupt_labels(dataset: MultiLabelDataset, proportion: float, seed: int) -> MultiLabelDataset:
    """Remove a proportion of the positive labels, reproducibly.

    Exactly ``floor(proportion * positives)`` positive entries, chosen
    uniformly without replacement, are set to 0. Features are untouched and
    the input dataset is not modified.

    :raises OutOfRangeError: When proportion is outside [0, 1]
    """

    if not 0.0 <= proportion <= 1.0:
        raise OutOfRangeError(f'Missing label proportion {proportion} outside [0, 1]')

    flat = dataset.labels.flatten()
    positives = np.flatnonzero(flat == 1.0)
    count = min(int(math.floor(proportion * positives.size + 1e-9)), positives.size)

    rng = np.random.default_rng(seed)
    removed = rng.choice(positives.size, size=count, replace=False)
    flat[positives[removed]] = 0.0

    logger.debug(f'Removed {count} of {positives.size} positive labels (seed {seed})')

    return dataset.with_labels(flat.reshape(dataset.labels.shape))
