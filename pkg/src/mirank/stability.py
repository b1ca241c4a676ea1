"""Subsampling stability of rankings.

For every sampling fraction, ``reps`` subsamples of ``round(fraction * n)``
rows are drawn without replacement and re-ranked. Each (fraction, rep) pair
gets its own random stream, spawned from the user seed through :class:`numpy.random.SeedSequence`
with ``spawn_key=(fraction_index, rep_index)`` and fed to PCG64, so results
do not depend on execution order or worker count.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import kendalltau

from .dataset import DataTable, ImportancePartition
from .errors import ComputeError
from .mrmr import MethodConfig, rank

DEFAULT_FRACTIONS = (0.95, 0.90, 0.80, 0.70, 0.60)
DEFAULT_REPS = 1000
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class BootstrapConfig:
    fractions: tuple[float, ...] = DEFAULT_FRACTIONS
    reps: int = DEFAULT_REPS
    seed: int = 0
    base: MethodConfig = field(default_factory=MethodConfig)

    def __post_init__(self):
        object.__setattr__(self, "fractions", tuple(float(f) for f in self.fractions))
        if not self.fractions:
            raise ValueError("need at least one sampling fraction")
        for f in self.fractions:
            if not 0 < f <= 1:
                raise ValueError(f"sampling fractions must lie in (0, 1], got {f}")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")


@dataclass
class FractionReport:
    fraction: float
    n_rows: int
    match_rate: float
    rank_counts: dict[str, list[int]]
    trajectories: list[list[int]]
    degenerate_reps: int = 0
    mean_kendall_tau: float = 1.0
    top_k_rates: list[float] = field(default_factory=list)


@dataclass
class BootstrapReport:
    reference_order: list[str]
    reps: int
    seed: int
    fractions: list[FractionReport]
    config: dict = field(default_factory=dict)

    def fraction(self, value: float) -> FractionReport:
        for fr in self.fractions:
            if math.isclose(fr.fraction, value):
                return fr
        raise KeyError(value)

    def to_json(self) -> dict:
        out = asdict(self)
        out["schema_version"] = SCHEMA_VERSION
        out["kind"] = "bootstrap_report"
        return out

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def from_json(cls, data: dict) -> "BootstrapReport":
        if data.get("kind") != "bootstrap_report":
            raise ValueError("not a bootstrap report")
        fracs = [FractionReport(**fr) for fr in data["fractions"]]
        return cls(
            reference_order=list(data["reference_order"]),
            reps=int(data["reps"]),
            seed=int(data["seed"]),
            fractions=fracs,
            config=dict(data.get("config", {})),
        )

    @classmethod
    def load(cls, path) -> "BootstrapReport":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def subsample_size(n: int, fraction: float) -> int:
    """``fraction * n`` rounded half up (80 % of 16 rows is 13)."""
    return int(math.floor(fraction * n + 0.5 + 1e-9))


def subsample_rows(n: int, fraction: float, seed: int, fraction_index: int, rep: int) -> np.ndarray:
    """Sorted row indices of one subsample, from its own derived stream."""
    size = subsample_size(n, fraction)
    if size < 2:
        raise ValueError(f"fraction {fraction} of {n} rows leaves fewer than 2 rows")
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(fraction_index, rep))
    rng = np.random.Generator(np.random.PCG64(seq))
    return np.sort(rng.choice(n, size=size, replace=False))


def _one_rep(table, partition, base, reference, fraction, seed, fi, rep):
    rows = subsample_rows(table.n_rows, fraction, seed, fi, rep)
    sub = table.take(rows)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        try:
            result = rank(sub, partition, base)
        except ComputeError:
            return list(reference[::-1]), True
    order = list(result.order)
    degenerate = bool(result.excluded)
    if degenerate:
        order += sorted(result.excluded)
    return order, degenerate


def _workers(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("MIRANK_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def bootstrap_ranks(
    table: DataTable,
    partition: ImportancePartition,
    config: BootstrapConfig,
    *,
    workers: int | None = None,
) -> BootstrapReport:
    """Re-rank subsamples and compare them with the full-data ranking.

    A rep matches when its complete ranked list equals the full-data list.
    Subsamples in which a candidate turns constant are ranked without it,
    the dropped variables are placed last, and the rep counts as a
    non-match.
    """
    base = config.base.with_(n_requested=None)
    full = rank(table, partition, base)
    if full.excluded:
        raise ComputeError(f"constant candidate(s) in the full data: {', '.join(full.excluded)}")
    reference = list(full.order)
    position = {name: i for i, name in enumerate(reference)}
    m = len(reference)
    n_workers = _workers(workers)

    reports = []
    for fi, fraction in enumerate(config.fractions):
        jobs = [(table, partition, base, reference, fraction, config.seed, fi, r) for r in range(config.reps)]
        if n_workers > 1:
            with ThreadPoolExecutor(max_workers=n_workers) as pool:
                outcomes = list(pool.map(lambda a: _one_rep(*a), jobs))
        else:
            outcomes = [_one_rep(*a) for a in jobs]

        counts = {name: [0] * m for name in reference}
        trajectories, taus = [], []
        matches = degenerate = 0
        prefix_hits = [0] * m
        for order, bad in outcomes:
            ranks = {name: i for i, name in enumerate(order)}
            for name in reference:
                counts[name][ranks[name]] += 1
            trajectories.append([ranks[name] + 1 for name in reference])
            degenerate += bad
            if not bad and order == reference:
                matches += 1
            for k in range(m):
                if order[: k + 1] == reference[: k + 1]:
                    prefix_hits[k] += 1
                else:
                    break
            if m > 1:
                tau = kendalltau([position[x] for x in order], list(range(m))).statistic
                taus.append(1.0 if np.isnan(tau) else float(tau))
        if degenerate:
            warnings.warn(
                f"{degenerate} subsample(s) at fraction {fraction:g} had constant candidates",
                RuntimeWarning,
                stacklevel=2,
            )
        reports.append(
            FractionReport(
                fraction=fraction,
                n_rows=subsample_size(table.n_rows, fraction),
                match_rate=matches / config.reps,
                rank_counts=counts,
                trajectories=trajectories,
                degenerate_reps=degenerate,
                mean_kendall_tau=float(np.mean(taus)) if taus else 1.0,
                top_k_rates=[h / config.reps for h in prefix_hits],
            )
        )
    return BootstrapReport(
        reference_order=reference,
        reps=config.reps,
        seed=config.seed,
        fractions=reports,
        config=describe_config(base),
    )


def describe_config(config: MethodConfig) -> dict:
    return {
        "method": config.method.name,
        "beta": config.method.beta,
        "scheme": config.scheme.value,
        "algo": config.direction.value,
        "discretization": str(config.rule),
        "estimator": str(config.estimator),
        "log_base": config.log_base,
        "closed": config.closed,
        "positional_entropy": config.positional_entropy,
    }


def parse_fractions(text: str | Sequence[float]) -> tuple[float, ...]:
    if isinstance(text, str):
        return tuple(float(part) for part in text.split(",") if part.strip())
    return tuple(float(x) for x in text)
