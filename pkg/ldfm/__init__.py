"""LDFM: multi-label feature selection through a linear encoder-decoder over learned numeric labels."""

from .config import ExperimentConfig
from .datasets import DatasetPair, MultiLabelDataset, corrupt_labels, load_mulan_pair, parse_arff, parse_label_header
from .linalg import SymEigen, solve_spd, solve_sylvester_kron, solve_sylvester_sympsd, sym_eigen
from .metrics import MetricsReport, average_precision, friedman_test, hamming_loss, micro_f1
from .mlknn import MlknnModel, mlknn_predict, mlknn_train
from .model import (
    LdfmConfig,
    LdfmModel,
    decode,
    encode,
    fit,
    objective,
    rank_features,
    reconstruction_error,
    update_w,
    update_y,
)
from .preprocess import PcaModel, apply_pca, fit_pca
from .rule import Rule
from .ruleset import RuleSet
from .semantics import init_numeric_labels, jaccard_correlation
