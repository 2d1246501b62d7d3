"""Ranking metrics for attack evaluation."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata


def auc(scores, labels) -> float:
    """Area under the ROC curve via the Mann-Whitney U statistic (ties count 1/2)."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("auc needs both positive and negative labels")
    ranks = rankdata(scores)  # average ranks for ties
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def precision_at_k(scores, labels, k: int) -> float:
    """Fraction of positives among the ``k`` highest scores; ties go to the lower index."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    if k <= 0:
        raise ValueError("k must be positive")
    if k > scores.size:
        raise ValueError(f"k={k} exceeds the {scores.size} scored items")
    order = np.lexsort((np.arange(scores.size), -scores))
    return float(labels[order[:k]].mean())
