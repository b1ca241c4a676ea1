"""Mutual-information variable ranking (mRMRe family)."""

__version__ = "0.1.0"

from .dataset import DataTable, ImportancePartition, load_bundled, load_csv, partition
from .discretize import BinningRule, discretize_table
from .infotheory import Estimator, entropy_plugin, mi_gaussian, mi_knn, mi_plugin
from .mrmr import Direction, Method, MethodConfig, RankResult, Scheme, rank, rank_backward, rank_forward
from .stability import BootstrapConfig, BootstrapReport, bootstrap_ranks

__all__ = [
    "BinningRule",
    "BootstrapConfig",
    "BootstrapReport",
    "DataTable",
    "Direction",
    "Estimator",
    "ImportancePartition",
    "Method",
    "MethodConfig",
    "RankResult",
    "Scheme",
    "bootstrap_ranks",
    "discretize_table",
    "entropy_plugin",
    "load_bundled",
    "load_csv",
    "mi_gaussian",
    "mi_knn",
    "mi_plugin",
    "partition",
    "rank",
    "rank_backward",
    "rank_forward",
]
