"""Entropy and mutual information estimators.

All functions take a ``base`` for the logarithm and default to nats. A
*group* is either a single 1-D array or a sequence of row-aligned 1-D
arrays treated jointly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from .errors import EmptyInputError, SingularCovarianceError, TooFewRowsError

JITTER_SEED = 20180101
JITTER_SCALE = 1e-10
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class JointTable:
    counts: np.ndarray
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise EmptyInputError("a contingency table needs at least one observation")
        if np.any(self.counts < 0) or int(self.counts.sum()) != self.n:
            raise ValueError("counts must be non-negative and sum to n")


@dataclass(frozen=True)
class Estimator:
    """``plugin`` on discretised codes, or ``gaussian`` / ``knn`` on raw numbers."""

    name: str = "plugin"
    k: int | None = None

    def __post_init__(self):
        if self.name == "knn":
            k = 3 if self.k is None else self.k
            if int(k) != k or k < 1:
                raise ValueError(f"knn needs a positive integer k, got {self.k!r}")
            object.__setattr__(self, "k", int(k))
        elif self.name not in ("plugin", "gaussian"):
            raise ValueError(f"unknown estimator {self.name!r}")

    @classmethod
    def parse(cls, text: str) -> "Estimator":
        name, _, arg = text.strip().lower().partition(":")
        if name == "knn":
            return cls("knn", int(arg) if arg else None)
        if arg:
            raise ValueError(f"estimator {name!r} takes no argument")
        return cls(name)

    @property
    def continuous(self) -> bool:
        return self.name != "plugin"

    def __str__(self) -> str:
        return f"knn:{self.k}" if self.name == "knn" else self.name


def _columns(group) -> list[np.ndarray]:
    if isinstance(group, np.ndarray):
        cols = [group] if group.ndim == 1 else [group[:, j] for j in range(group.shape[1])]
    else:
        cols = [np.asarray(c) for c in group]
        if cols and cols[0].ndim == 0:
            cols = [np.asarray(group)]
    if not cols or cols[0].size == 0:
        raise EmptyInputError("empty variable group")
    n = cols[0].size
    if any(c.size != n for c in cols):
        raise ValueError("columns in a group must be row-aligned")
    return cols


def joint_codes(group) -> np.ndarray:
    """Collapse one or more code columns into a single dense code column."""
    cols = _columns(group)
    _, code = np.unique(np.asarray(cols[0]), return_inverse=True)
    for c in cols[1:]:
        _, nxt = np.unique(np.asarray(c), return_inverse=True)
        _, code = np.unique(code * (int(nxt.max()) + 1) + nxt, return_inverse=True)
    return code.astype(np.int64).ravel()


def _entropy_counts(counts: np.ndarray, n: int) -> float:
    # sorted so that the sum does not depend on cell enumeration order
    p = np.sort(counts[counts > 0]) / n
    return float(-np.sum(p * np.log(p)))


def contingency(group_a, group_b) -> JointTable:
    a = joint_codes(group_a)
    b = joint_codes(group_b)
    if a.size != b.size:
        raise ValueError("groups must be row-aligned")
    nb = int(b.max()) + 1
    counts = np.bincount(a * nb + b, minlength=(int(a.max()) + 1) * nb).reshape(-1, nb)
    return JointTable(counts, int(a.size))


def entropy_plugin(group, base: float = math.e) -> float:
    """Plug-in (maximum likelihood) entropy of one or more discrete columns."""
    code = joint_codes(group)
    h = _entropy_counts(np.bincount(code), code.size)
    return max(h, 0.0) / math.log(base)


def mi_from_table(table: JointTable, base: float = math.e) -> float:
    """Mutual information of a contingency table, ``H(A) + H(B) - H(A,B)``."""
    c = table.counts
    ha = _entropy_counts(c.sum(axis=1), table.n)
    hb = _entropy_counts(c.sum(axis=0), table.n)
    hab = _entropy_counts(c.ravel(), table.n)
    mi = (min(ha, hb) + max(ha, hb)) - hab
    return max(mi, 0.0) / math.log(base)


def mi_plugin(group_a, group_b, base: float = math.e) -> float:
    """Plug-in mutual information between two groups of discrete columns."""
    return mi_from_table(contingency(group_a, group_b), base)


def _matrix(group) -> np.ndarray:
    return np.column_stack([np.asarray(c, dtype=float) for c in _columns(group)])


def _check_block(cov: np.ndarray, label: str) -> float:
    eig = np.linalg.eigvalsh(cov)
    if eig.min() <= SINGULAR_TOL * max(eig.max(), 1.0):
        raise SingularCovarianceError(label)
    return float(np.sum(np.log(eig)))


def mi_gaussian(group_a, group_b, base: float = math.e) -> float:
    """Mutual information of a jointly Gaussian fit to the sample.

    ``-1/2 log(det S / (det S_AA det S_BB))`` with ``S`` the joint sample
    covariance; reduces to ``-1/2 log(1 - rho^2)`` for two scalars.
    """
    a = _matrix(group_a)
    b = _matrix(group_b)
    if a.shape[0] != b.shape[0]:
        raise ValueError("groups must be row-aligned")
    if a.shape[0] < 2:
        raise EmptyInputError("need at least two rows for a covariance")
    da = a.shape[1]
    joint = np.column_stack([a, b])
    # work on the correlation scale so the singularity test is unit free
    sd = joint.std(axis=0, ddof=1)
    for j, s in enumerate(sd):
        if s == 0:
            raise SingularCovarianceError("A" if j < da else "B")
    corr = np.atleast_2d(np.corrcoef(joint, rowvar=False))
    logdet_a = _check_block(corr[:da, :da], "A")
    logdet_b = _check_block(corr[da:, da:], "B")
    logdet = _check_block(corr, "joint")
    mi = -0.5 * (logdet - logdet_a - logdet_b)
    return mi / math.log(base)


def _dejitter(x: np.ndarray) -> np.ndarray:
    """Break exact coordinate ties with tiny deterministic noise."""
    out = x.copy()
    rng = np.random.default_rng(JITTER_SEED)
    for j in range(out.shape[1]):
        col = out[:, j]
        if np.unique(col).size < col.size:
            span = float(col.max() - col.min()) or 1.0
            out[:, j] = col + rng.uniform(-1, 1, col.size) * JITTER_SCALE * span
    return out


def mi_knn(group_a, group_b, k: int = 3, base: float = math.e) -> float:
    """k-nearest-neighbour mutual information (first KSG estimator).

    Uses max-norm neighbourhoods in the joint space; marginal counts include
    only points strictly closer than the k-th joint neighbour. The result can
    be slightly negative for independent data and is returned as is.
    """
    a = _matrix(group_a)
    b = _matrix(group_b)
    n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("groups must be row-aligned")
    if n <= k:
        raise TooFewRowsError(n, k)
    a = _dejitter(a)
    b = _dejitter(b)
    joint = np.column_stack([a, b])
    dist, _ = cKDTree(joint).query(joint, k=k + 1, p=np.inf)
    eps = np.nextafter(dist[:, -1], 0)
    na = cKDTree(a).query_ball_point(a, eps, p=np.inf, return_length=True) - 1
    nb = cKDTree(b).query_ball_point(b, eps, p=np.inf, return_length=True) - 1
    mi = digamma(k) + digamma(n) - np.mean(digamma(na + 1) + digamma(nb + 1))
    return float(mi) / math.log(base)
