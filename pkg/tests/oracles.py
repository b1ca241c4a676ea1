"""Independent reference implementations used as test oracles.

Nothing here imports the estimators or the search code under test: entropies
come from ``collections.Counter`` and ``math.log``, and the greedy searches
recompute every score from scratch at every step.
"""

from __future__ import annotations

import math
from collections import Counter

TIE = 1e-12


def entropy(*cols, base=2.0) -> float:
    n = len(cols[0])
    counts = Counter(zip(*cols))
    return -sum(c / n * math.log(c / n, base) for c in counts.values())


def mutual_info(a_cols, b_cols, base=2.0) -> float:
    """MI from the definition sum p(a,b) log p(a,b)/(p(a)p(b))."""
    n = len(a_cols[0])
    ka = list(zip(*a_cols))
    kb = list(zip(*b_cols))
    pa, pb, pab = Counter(ka), Counter(kb), Counter(zip(ka, kb))
    total = 0.0
    for (x, y), c in pab.items():
        total += c / n * math.log((c / n) / ((pa[x] / n) * (pb[y] / n)), base)
    return total


def _score(f, selected, data, important, method, beta, scheme):
    rel = mutual_info([data[f]], [data[c] for c in important])
    if not selected:
        return rel
    red = 0.0
    for s in selected:
        mi = mutual_info([data[f]], [data[s]])
        if method == "battiti":
            a = beta
        elif method == "peng":
            a = 1 / len(selected)
        elif method == "kwak":
            a = beta * mutual_info([data[s]], [data[c] for c in important]) / entropy(data[s])
        else:
            a = 1 / (len(selected) * min(entropy(data[f]), entropy(data[s])))
        red += a * mi
    if scheme == "mid":
        return rel - red
    return rel if red <= 1e-12 else rel / red


def _argbest(scores: dict, maximise: bool) -> str:
    best = max(scores.values()) if maximise else min(scores.values())
    close = [k for k, v in scores.items() if abs(v - best) <= TIE]
    return sorted(close)[0]


def greedy_forward(data, important, candidates, method, scheme, beta=1.0):
    """Ordered names and per-step score columns, recomputed from scratch."""
    left = list(candidates)
    chosen, columns = [], []
    while len(left) > 1 or not chosen:
        col = {f: _score(f, chosen, data, important, method, beta, scheme) for f in left}
        pick = _argbest(col, True)
        columns.append(col)
        chosen.append(pick)
        left.remove(pick)
        if not left:
            break
    chosen += left
    return chosen, columns


def greedy_backward(data, important, candidates, method, scheme, beta=1.0):
    left = list(candidates)
    pruned, columns = [], []
    while len(left) > 1:
        col = {f: _score(f, [g for g in left if g != f], data, important, method, beta, scheme) for f in left}
        drop = _argbest(col, False)
        columns.append(col)
        pruned.append(drop)
        left.remove(drop)
    return pruned + left, columns


def optimal_kmeans_sse(values, k) -> float:
    """Exact 1-D k-means cost by dynamic programming over sorted values."""
    x = sorted(values)
    n = len(x)
    pre = [0.0]
    pre2 = [0.0]
    for v in x:
        pre.append(pre[-1] + v)
        pre2.append(pre2[-1] + v * v)

    def cost(i, j):  # x[i:j]
        s = pre[j] - pre[i]
        return (pre2[j] - pre2[i]) - s * s / (j - i)

    inf = float("inf")
    dp = [[inf] * (n + 1) for _ in range(k + 1)]
    dp[0][0] = 0.0
    for c in range(1, k + 1):
        for j in range(c, n + 1):
            dp[c][j] = min(dp[c - 1][i] + cost(i, j) for i in range(c - 1, j))
    return dp[k][n]
