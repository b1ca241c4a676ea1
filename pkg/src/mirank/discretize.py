"""Unsupervised univariate discretisation.

Numeric columns are turned into integer codes either by equal-width
histogram binning, with the bin count taken from one of the classic rules
(or fixed by hand), or by 1-D k-means whose cluster count is picked by the
elbow criterion. Categorical columns pass through untouched.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .dataset import DataTable

HISTOGRAM_RULES = ("cencov", "fd", "scott", "sturges", "doane", "rice")
DEFAULT_ELBOW_RATIO = 0.75
ELBOW_MAX_K = 10
KMEANS_TOL = 1e-10
KMEANS_MAX_ITER = 100


@dataclass(frozen=True)
class BinningRule:
    """A discretisation rule.

    ``name`` is one of :data:`HISTOGRAM_RULES`, ``"kmeans"`` (with ``ratio``)
    or ``"manual"`` (with ``k``).
    """

    name: str
    k: int | None = None
    ratio: float | None = None

    def __post_init__(self):
        if self.name == "manual":
            if self.k is None or int(self.k) != self.k or self.k < 2:
                raise ValueError(f"manual binning needs an integer k >= 2, got {self.k!r}")
        elif self.name == "kmeans":
            ratio = DEFAULT_ELBOW_RATIO if self.ratio is None else self.ratio
            if not 0 < ratio < 1:
                raise ValueError(f"elbow ratio must lie in (0, 1), got {ratio}")
            object.__setattr__(self, "ratio", float(ratio))
        elif self.name not in HISTOGRAM_RULES:
            raise ValueError(f"unknown discretisation rule {self.name!r}")

    @classmethod
    def parse(cls, text: str) -> "BinningRule":
        """Parse ``sturges``, ``fd``, ..., ``kmeans[:ratio]`` or ``manual:<k>``."""
        name, _, arg = text.strip().lower().partition(":")
        if name == "manual":
            if not arg:
                raise ValueError("manual binning needs a bin count, e.g. manual:5")
            return cls("manual", k=int(arg))
        if name == "kmeans":
            return cls("kmeans", ratio=float(arg) if arg else None)
        if arg:
            raise ValueError(f"rule {name!r} takes no argument")
        return cls(name)

    @property
    def is_histogram(self) -> bool:
        return self.name != "kmeans"

    def __str__(self) -> str:
        if self.name == "manual":
            return f"manual:{self.k}"
        if self.name == "kmeans":
            return f"kmeans:{self.ratio:g}"
        return self.name


def _sturges(n: int) -> int:
    return math.ceil(math.log2(n)) + 1


def _width_bins(span: float, width: float, n: int) -> int:
    # a vanishing width relative to the range would ask for absurd numbers of
    # bins; more bins than observations cannot separate anything further
    ratio = span / width if width > 0 else math.inf
    if not ratio <= n:
        warnings.warn(f"bin width rule asks for more than n={n} bins; capping at n", RuntimeWarning, stacklevel=3)
        return n
    return max(1, math.ceil(ratio))


def bin_count(rule: BinningRule, values) -> int:
    """Number of equal-width bins the rule asks for on ``values``."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("cannot pick a bin count for an empty vector")
    if rule.name == "kmeans":
        raise ValueError("kmeans is not a histogram rule")
    if rule.name == "manual":
        return int(rule.k)
    n = x.size
    span = float(x.max() - x.min())
    if span == 0.0:
        warnings.warn("all values are equal; using a single bin", RuntimeWarning, stacklevel=2)
        return 1
    if rule.name == "sturges":
        return _sturges(n)
    if rule.name == "rice":
        return math.ceil(2 * n ** (1 / 3))
    if rule.name == "cencov":
        return math.ceil(n ** (1 / 3))
    if rule.name == "scott":
        width = 3.49 * float(np.std(x, ddof=1)) * n ** (-1 / 3)
        return _width_bins(span, width, n)
    if rule.name == "fd":
        q1, q3 = np.percentile(x, [25, 75])  # linear interpolation, i.e. type 7
        iqr = float(q3 - q1)
        if iqr == 0.0:
            warnings.warn("interquartile range is zero; falling back to Sturges", RuntimeWarning, stacklevel=2)
            return _sturges(n)
        width = 2 * iqr * n ** (-1 / 3)
        return _width_bins(span, width, n)
    if rule.name == "doane":
        if n < 3:
            skew_term = 0.0
        else:
            g1 = float(stats.skew(x, bias=False))
            sigma_g1 = math.sqrt(6 * (n - 2) / ((n + 1) * (n + 3)))
            skew_term = math.log2(1 + abs(g1) / sigma_g1)
        return max(1, math.ceil(1 + math.log2(n) + skew_term))
    raise AssertionError(rule.name)


def equal_width_codes(values, k: int, closed: str = "left") -> np.ndarray:
    """Assign each value to one of ``k`` equal-width bins over ``[min, max]``.

    With ``closed="left"`` bins are ``[a, b)`` and the last one is closed on
    both sides; with ``closed="right"`` bins are ``(a, b]`` and the first is
    closed on both sides.
    """
    if closed not in ("left", "right"):
        raise ValueError(f"closed must be 'left' or 'right', got {closed!r}")
    x = np.asarray(values, dtype=float)
    lo, hi = float(x.min()), float(x.max())
    if k == 1 or hi == lo:
        return np.zeros(x.size, dtype=np.int64)
    inner = np.linspace(lo, hi, k + 1)[1:-1]
    side = "right" if closed == "left" else "left"
    return np.searchsorted(inner, x, side=side).astype(np.int64)


def _lloyd(x: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lloyd iterations on sorted 1-D data; returns (labels, centers)."""
    for _ in range(KMEANS_MAX_ITER):
        order = np.argsort(centers, kind="stable")
        centers = centers[order]
        cuts = (centers[1:] + centers[:-1]) / 2
        labels = np.searchsorted(cuts, x, side="right")
        sums = np.bincount(labels, weights=x, minlength=centers.size)
        counts = np.bincount(labels, minlength=centers.size)
        new = np.where(counts > 0, sums / np.maximum(counts, 1), centers)
        moved = float(np.max(np.abs(new - centers)))
        centers = new
        if moved < KMEANS_TOL:
            break
    cuts = (centers[1:] + centers[:-1]) / 2
    labels = np.searchsorted(cuts, x, side="right")
    return labels, centers


def kmeans_1d(values, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic 1-D k-means, centres seeded at evenly spaced quantiles.

    Returns compact labels (empty clusters dropped, codes ordered by centre)
    and the matching centres.
    """
    x = np.asarray(values, dtype=float)
    start = np.quantile(x, (np.arange(k) + 0.5) / k)
    labels, centers = _lloyd(x, start)
    used = np.unique(labels)
    remap = np.full(centers.size, -1, dtype=np.int64)
    remap[used] = np.arange(used.size)
    return remap[labels], centers[used]


def between_ratio(values, labels) -> float:
    """Between-group sum of squares over total sum of squares."""
    x = np.asarray(values, dtype=float)
    total = float(np.sum((x - x.mean()) ** 2))
    if total == 0.0:
        return 1.0
    counts = np.bincount(labels)
    means = np.bincount(labels, weights=x) / np.maximum(counts, 1)
    between = float(np.sum(counts * (means - x.mean()) ** 2))
    return between / total


def elbow_clusters(values, ratio: float = DEFAULT_ELBOW_RATIO) -> tuple[np.ndarray, int]:
    """Smallest k whose k-means explains at least ``ratio`` of the variance."""
    if not 0 < ratio < 1:
        raise ValueError(f"elbow ratio must lie in (0, 1), got {ratio}")
    x = np.asarray(values, dtype=float)
    distinct = np.unique(x).size
    if distinct <= 1:
        return np.zeros(x.size, dtype=np.int64), 1
    k_max = min(ELBOW_MAX_K, distinct)
    labels = np.zeros(x.size, dtype=np.int64)
    for k in range(2, k_max + 1):
        labels, _ = kmeans_1d(x, k)
        if between_ratio(x, labels) >= ratio:
            break
    return labels, int(labels.max()) + 1


def discretize_column(values, rule: BinningRule, closed: str = "left") -> tuple[np.ndarray, int]:
    """Integer codes and arity for a numeric vector."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("cannot discretise an empty vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("values must be finite")
    if rule.name == "kmeans":
        return elbow_clusters(x, rule.ratio)
    k = bin_count(rule, x)
    return equal_width_codes(x, k, closed), k


@dataclass(frozen=True)
class DiscreteTable:
    codes: dict[str, np.ndarray]
    arities: dict[str, int]
    provenance: dict[str, str] = field(default_factory=dict)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.codes)

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.codes.values())))

    def __getitem__(self, name: str) -> np.ndarray:
        return self.codes[name]


def discretize_table(table: DataTable, rule: BinningRule, closed: str = "left") -> DiscreteTable:
    codes, arities, provenance = {}, {}, {}
    for col in table.columns:
        if col.is_numeric:
            c, k = discretize_column(col.values, rule, closed)
            provenance[col.name] = str(rule)
        else:
            c, k = col.values, col.arity
            provenance[col.name] = "categorical"
        c = np.asarray(c, dtype=np.int64)
        c.setflags(write=False)
        codes[col.name] = c
        arities[col.name] = int(k)
    return DiscreteTable(codes, arities, provenance)
