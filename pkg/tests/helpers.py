"""Table builders shared by the tests."""

import numpy as np

from mirank.dataset import Column, DataTable


def categorical_table(data: dict[str, list]) -> DataTable:
    """Table whose columns are all categorical (no discretisation applied)."""
    return DataTable(tuple(Column.categorical(k, [str(v) for v in vals]) for k, vals in data.items()))


def random_discrete(rng: np.random.Generator, n_cand: int, n_rows: int, arity=(2, 4)) -> dict[str, list[int]]:
    """Random integer table with a target ``y`` and candidates ``v0..``.

    Candidates are noisy functions of ``y`` and of each other so that
    relevance and redundancy both vary. No column is constant.
    """
    while True:
        y = rng.integers(0, 3, n_rows)
        data = {"y": y.tolist()}
        prev = y
        for i in range(n_cand):
            k = int(rng.integers(arity[0], arity[1] + 1))
            noise = rng.integers(0, k, n_rows)
            keep = rng.random(n_rows) < rng.uniform(0.1, 0.9)
            src = prev if rng.random() < 0.5 else y
            col = np.where(keep, src % k, noise)
            data[f"v{i}"] = col.tolist()
            prev = col
        if all(len(set(v)) > 1 for v in data.values()):
            return data
