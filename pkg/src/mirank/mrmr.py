"""Greedy minimum-redundancy maximum-relevance ranking.

The local score of a candidate ``f`` given the already selected set ``S``
and the importance set ``C`` is::

    relevance  = MI(f; C)
    redundancy = sum over s in S of alpha(f, s) * MI(f; s)
    mid        = relevance - redundancy
    miq        = relevance / redundancy   (relevance when redundancy ~ 0)

``alpha`` is one of four normalisations:

========  ================================================
battiti   ``beta``
kwak      ``beta * MI(s; C) / H(s)``
peng      ``1 / |S|``
esteves   ``1 / (|S| * min(H(f), H(s)))``
========  ================================================
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .dataset import DataTable, ImportancePartition
from .discretize import BinningRule, DiscreteTable, discretize_column, discretize_table
from .errors import ComputeError, OverlappingGroupsError
from .infotheory import Estimator, entropy_plugin, joint_codes, mi_gaussian, mi_knn, mi_plugin

METHODS = ("battiti", "kwak", "peng", "esteves")
MIQ_EPS = 1e-12
TIE_TOL = 1e-12


class Scheme(str, enum.Enum):
    MID = "mid"
    MIQ = "miq"


class Direction(str, enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class Method:
    name: str = "peng"
    beta: float = 1.0

    def __post_init__(self):
        if self.name not in METHODS:
            raise ValueError(f"unknown method {self.name!r}; choose from {', '.join(METHODS)}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")

    def __str__(self) -> str:
        if self.name in ("battiti", "kwak"):
            return f"{self.name}(beta={self.beta:g})"
        return self.name


@dataclass(frozen=True)
class MethodConfig:
    """Everything that determines a ranking.

    ``log_base`` sets the information unit (2 gives bits). ``closed`` picks
    which side of the equal-width bins is closed. ``positional_entropy``
    switches the esteves normaliser to the legacy lookup described in
    :func:`rank_forward`.
    """

    method: Method = field(default_factory=Method)
    scheme: Scheme = Scheme.MID
    direction: Direction = Direction.FORWARD
    rule: BinningRule = field(default_factory=lambda: BinningRule("sturges"))
    estimator: Estimator = field(default_factory=Estimator)
    n_requested: int | None = None
    seed: int = 0
    log_base: float = 2.0
    closed: str = "left"
    positional_entropy: bool = False

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.n_requested is not None and self.n_requested < 1:
            raise ValueError("n_requested must be a positive integer")
        if not self.log_base > 1:
            raise ValueError("log_base must exceed 1")
        if self.closed not in ("left", "right"):
            raise ValueError("closed must be 'left' or 'right'")

    def with_(self, **changes) -> "MethodConfig":
        return replace(self, **changes)


class InfoCache:
    """Lazily computed and memoised relevance, redundancy and entropy terms.

    ``table`` may be a :class:`DataTable` (discretised here for the plug-in
    estimator) or an already discretised :class:`DiscreteTable`.
    """

    def __init__(self, table, partition: ImportancePartition, config: MethodConfig):
        overlap = set(partition.important) & set(partition.candidates)
        if overlap:
            raise OverlappingGroupsError(overlap)
        self.partition = partition
        self.config = config
        self.estimator = config.estimator
        self.base = config.log_base
        self._rel: dict[str, float] = {}
        self._mi: dict[frozenset, float] = {}
        self._h: dict[str, float] = {}
        names = list(partition.important) + list(partition.candidates)

        if isinstance(table, DiscreteTable):
            if self.estimator.continuous:
                raise ValueError("a discretised table only supports the plug-in estimator")
            self._codes = {n: table[n] for n in names}
            self._raw = None
        elif self.estimator.continuous:
            for n in names:
                if not table[n].is_numeric:
                    raise ValueError(
                        f"estimator {self.estimator} needs numeric variables; {n!r} is categorical"
                    )
            self._raw = {n: table[n].values for n in names}
            self._codes = {}
        else:
            sub = DataTable(tuple(table[n] for n in names))
            disc = discretize_table(sub, config.rule, config.closed)
            self._codes = {n: disc[n] for n in names}
            self._raw = None

        if self._raw is None:
            self._c_codes = joint_codes([self._codes[c] for c in partition.important])
        else:
            self._c_matrix = np.column_stack([self._raw[c] for c in partition.important])

    def codes(self, name: str) -> np.ndarray:
        if name not in self._codes:
            col = self._raw[name]
            codes, _ = discretize_column(col, self.config.rule, self.config.closed)
            self._codes[name] = codes
        return self._codes[name]

    def _pair(self, a, b) -> float:
        est = self.estimator
        if est.name == "plugin":
            return mi_plugin(a, b, base=self.base)
        if est.name == "gaussian":
            return mi_gaussian(a, b, base=self.base)
        return mi_knn(a, b, k=est.k, base=self.base)

    def relevance(self, f: str) -> float:
        """MI(f; C)."""
        if f not in self._rel:
            if self._raw is None:
                self._rel[f] = self._pair(self._codes[f], self._c_codes)
            else:
                self._rel[f] = self._pair(self._raw[f], self._c_matrix)
        return self._rel[f]

    def mi(self, f: str, g: str) -> float:
        """MI(f; g) between two candidates."""
        if f == g:
            raise OverlappingGroupsError({f})
        key = frozenset((f, g))
        if key not in self._mi:
            # fixed argument order keeps the cached value independent of call order
            a, b = sorted((f, g))
            if self._raw is None:
                self._mi[key] = self._pair(self._codes[a], self._codes[b])
            else:
                self._mi[key] = self._pair(self._raw[a], self._raw[b])
        return self._mi[key]

    def entropy(self, f: str) -> float:
        """Plug-in entropy of the discretised variable."""
        if f not in self._h:
            self._h[f] = entropy_plugin(self.codes(f), base=self.base)
        return self._h[f]

    def is_constant(self, f: str) -> bool:
        if self._raw is not None:
            col = self._raw[f]
            return bool(np.all(col == col[0]))
        return self.entropy(f) == 0.0


def alpha(method: Method, f_i: str, f_s: str, selected: Sequence[str], cache: InfoCache) -> float:
    """Scaling factor of the redundancy term MI(f_i; f_s).

    Returns ``inf`` when a required entropy is zero.
    """
    if not selected:
        raise ValueError("alpha is only defined for a non-empty selected set")
    if method.name == "battiti":
        return method.beta
    if method.name == "peng":
        return 1.0 / len(selected)
    if method.name == "kwak":
        h = cache.entropy(f_s)
        return math.inf if h == 0 else method.beta * cache.relevance(f_s) / h
    h = min(cache.entropy(f_i), cache.entropy(f_s))
    return math.inf if h == 0 else 1.0 / (len(selected) * h)


def _weighted(a: float, mi: float) -> float:
    if math.isinf(a):
        # 0 * inf is taken as 0: nothing shared, nothing to penalise
        return 0.0 if mi == 0 else math.inf
    return a * mi


def combine(relevance: float, redundancy: float, scheme: Scheme) -> float:
    if math.isinf(redundancy):
        return -math.inf
    if scheme is Scheme.MID:
        return relevance - redundancy
    if redundancy <= MIQ_EPS:
        return relevance
    return relevance / redundancy


def local_score(
    f_i: str,
    selected: Sequence[str],
    config: MethodConfig,
    cache: InfoCache,
    *,
    alphas: Sequence[float] | None = None,
) -> float:
    """Score of candidate ``f_i`` given the selected set.

    ``alphas`` overrides the per-selected scaling factors (used by the legacy
    positional mode); by default they come from :func:`alpha`.
    """
    if f_i in selected:
        raise ValueError(f"{f_i!r} is already selected")
    relevance = cache.relevance(f_i)
    if not selected:
        return relevance
    if alphas is None:
        alphas = [alpha(config.method, f_i, s, selected, cache) for s in selected]
    redundancy = 0.0
    for a, s in zip(alphas, selected):
        redundancy += _weighted(a, cache.mi(f_i, s))
    return combine(relevance, redundancy, config.scheme)


def _legacy_alphas(position: int, selected: Sequence[str], pool: Sequence[str], cache: InfoCache) -> list[float]:
    """Esteves factors with entropies read by list position.

    The candidate's entropy is that of ``pool[position]`` and every selected
    variable's entropy is that of ``pool[0]``, where ``pool`` is the original
    candidate order.
    """
    h = min(cache.entropy(pool[position]), cache.entropy(pool[0]))
    a = math.inf if h == 0 else 1.0 / (len(selected) * h)
    return [a] * len(selected)


@dataclass(frozen=True)
class RankResult:
    """Outcome of a ranking.

    ``matrix[i, j]`` is the score of ``rows[i]`` at step ``j``; NaN marks an
    absent entry. ``selection_scores[j]`` is the score of ``order[j]`` when
    it was picked (forward) or pruned (backward); NaN when it was appended
    without scoring.
    """

    order: tuple[str, ...]
    selection_scores: np.ndarray
    matrix: np.ndarray
    rows: tuple[str, ...]
    direction: Direction
    config: MethodConfig
    relevance: dict[str, float]
    excluded: tuple[str, ...] = ()
    important: tuple[str, ...] = ()

    @property
    def n_steps(self) -> int:
        return self.matrix.shape[1]

    def score(self, name: str, step: int) -> float:
        return float(self.matrix[self.rows.index(name), step])

    def __eq__(self, other):
        if not isinstance(other, RankResult):
            return NotImplemented
        return (
            self.order == other.order
            and self.rows == other.rows
            and self.direction == other.direction
            and self.excluded == other.excluded
            and np.array_equal(self.selection_scores, other.selection_scores, equal_nan=True)
            and np.array_equal(self.matrix, other.matrix, equal_nan=True)
        )

    __hash__ = None


def _pick(scores: dict[str, float], maximise: bool) -> str:
    values = list(scores.values())
    best = max(values) if maximise else min(values)
    if math.isinf(best):
        tied = [n for n, v in scores.items() if v == best]
    elif maximise:
        tied = [n for n, v in scores.items() if v >= best - TIE_TOL]
    else:
        tied = [n for n, v in scores.items() if v <= best + TIE_TOL]
    return min(tied)


def _prepare(table, partition: ImportancePartition, config: MethodConfig, cache: InfoCache | None):
    cache = cache or InfoCache(table, partition, config)
    pool, excluded = [], []
    for f in partition.candidates:
        (excluded if cache.is_constant(f) else pool).append(f)
    if excluded:
        warnings.warn(
            f"excluding zero-entropy candidate(s) {', '.join(excluded)}", RuntimeWarning, stacklevel=3
        )
    if not pool:
        raise ComputeError("every candidate variable is constant; nothing to rank")
    if config.n_requested is not None and config.n_requested > len(pool):
        raise ValueError(f"n_requested={config.n_requested} exceeds the {len(pool)} rankable candidates")
    return cache, pool, tuple(excluded)


Progress = Callable[[int, int, str, float], None]


def rank_forward(
    table,
    partition: ImportancePartition,
    config: MethodConfig,
    *,
    cache: InfoCache | None = None,
    progress: Progress | None = None,
) -> RankResult:
    """Forward selection: start from the most relevant variable, then add the
    best-scoring remaining candidate at each step.

    With a single candidate left it is appended unscored. Ties within
    ``1e-12`` go to the lexicographically smallest name.

    With ``config.positional_entropy`` the esteves entropies are looked up
    by position (see :func:`_legacy_alphas`) using the candidate's index in
    the remaining list, which keeps the original column order.
    """
    if config.direction is not Direction.FORWARD:
        raise ValueError("rank_forward needs direction=forward")
    cache, pool, excluded = _prepare(table, partition, config, cache)
    legacy = config.positional_entropy and config.method.name == "esteves"
    m = len(pool)
    limit = config.n_requested or m
    remaining = list(pool)
    selected: list[str] = []
    columns: list[dict[str, float]] = []
    while remaining and len(selected) < limit:
        if selected and len(remaining) == 1:
            selected.append(remaining.pop())
            break
        scores = {}
        for pos, f in enumerate(remaining):
            alphas = _legacy_alphas(pos, selected, pool, cache) if legacy and selected else None
            scores[f] = local_score(f, selected, config, cache, alphas=alphas)
        best = _pick(scores, maximise=True)
        columns.append(scores)
        selected.append(best)
        remaining.remove(best)
        if progress:
            progress(len(selected), m, best, scores[best])
    return _assemble(selected, remaining, columns, pool, excluded, Direction.FORWARD, config, cache, partition)


def rank_backward(
    table,
    partition: ImportancePartition,
    config: MethodConfig,
    *,
    cache: InfoCache | None = None,
    progress: Progress | None = None,
) -> RankResult:
    """Backward elimination: repeatedly prune the candidate whose score,
    computed against every other remaining candidate, is lowest.

    The returned order runs from the first pruned (least important) to the
    last remaining variable, which is appended unscored.
    """
    if config.direction is not Direction.BACKWARD:
        raise ValueError("rank_backward needs direction=backward")
    if config.positional_entropy:
        raise ValueError("positional entropy lookup is only defined for forward search")
    cache, pool, excluded = _prepare(table, partition, config, cache)
    m = len(pool)
    limit = config.n_requested or m
    remaining = list(pool)
    pruned: list[str] = []
    columns: list[dict[str, float]] = []
    while remaining and len(pruned) < limit:
        if len(remaining) == 1:
            if m == 1:
                columns.append({remaining[0]: cache.relevance(remaining[0])})
            pruned.append(remaining.pop())
            break
        scores = {}
        for f in remaining:
            others = [g for g in remaining if g != f]
            scores[f] = local_score(f, others, config, cache)
        worst = _pick(scores, maximise=False)
        columns.append(scores)
        pruned.append(worst)
        remaining.remove(worst)
        if progress:
            progress(len(pruned), m, worst, scores[worst])
    return _assemble(pruned, remaining, columns, pool, excluded, Direction.BACKWARD, config, cache, partition)


def _assemble(order, remaining, columns, pool, excluded, direction, config, cache, partition) -> RankResult:
    rows = tuple(order) + tuple(f for f in pool if f in remaining)
    m = len(pool)
    matrix = np.full((m, m), np.nan)
    for j, col in enumerate(columns):
        for i, name in enumerate(rows):
            if name in col:
                matrix[i, j] = col[name]
    sel = np.array([matrix[j, j] if j < len(columns) else np.nan for j in range(len(order))])
    matrix.setflags(write=False)
    sel.setflags(write=False)
    return RankResult(
        order=tuple(order),
        selection_scores=sel,
        matrix=matrix,
        rows=rows,
        direction=direction,
        config=config,
        relevance={f: cache.relevance(f) for f in pool},
        excluded=excluded,
        important=tuple(partition.important),
    )


def rank(table, partition: ImportancePartition, config: MethodConfig, **kwargs) -> RankResult:
    """Dispatch on ``config.direction``."""
    if config.direction is Direction.FORWARD:
        return rank_forward(table, partition, config, **kwargs)
    return rank_backward(table, partition, config, **kwargs)
