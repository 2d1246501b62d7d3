"""Distance-based edge inference: linked pairs sit closer than unlinked ones."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import TextAttributedGraph


@dataclass
class EdgeAttackResult:
    pairs: np.ndarray  # m x 2
    scores: np.ndarray
    predictions: np.ndarray
    threshold: float


def two_means_threshold(scores, iters: int = 100) -> float:
    """Split 1-D scores with 2-means started at (min, max).

    A score equidistant from both centers joins the lower cluster, so the
    returned threshold is the smallest float strictly above the midpoint:
    ``score >= threshold`` holds exactly for the upper cluster.
    """
    s = np.asarray(scores, dtype=float)
    lo, hi = float(s.min()), float(s.max())
    for _ in range(iters):
        mid = (lo + hi) / 2.0
        upper = s > mid
        if upper.all() or not upper.any():
            break
        new_lo, new_hi = float(s[~upper].mean()), float(s[upper].mean())
        if new_lo == lo and new_hi == hi:
            break
        lo, hi = new_lo, new_hi
    return float(np.nextafter((lo + hi) / 2.0, np.inf))


def distance_edge_attack(R, pairs) -> EdgeAttackResult:
    """Score each candidate pair by negative Euclidean distance and threshold by 2-means."""
    R = np.asarray(R, dtype=float)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(pairs) < 2:
        raise ValueError("need at least 2 candidate pairs")
    if pairs.min() < 0 or pairs.max() >= R.shape[0]:
        raise ValueError("pair endpoint out of range")
    diff = R[pairs[:, 0]] - R[pairs[:, 1]]
    scores = -np.sqrt(np.einsum("ij,ij->i", diff, diff))
    thr = two_means_threshold(scores)
    return EdgeAttackResult(pairs, scores, scores >= thr, thr)


def candidate_pairs(g: TextAttributedGraph, seed: int = 0, max_full: int = 300):
    """Candidate pairs and their true labels.

    All ``u < v`` pairs when ``n <= max_full``; otherwise every true edge plus
    an equal number of distinct seeded-random non-edges.
    """
    n = g.n
    edge_set = set(g.edges)
    if n <= max_full:
        iu, ju = np.triu_indices(n, k=1)
        pairs = np.column_stack([iu, ju])
        labels = np.array([(int(a), int(b)) in edge_set for a, b in pairs], dtype=bool)
        return pairs, labels
    rng = np.random.default_rng(seed)
    target = min(len(edge_set), n * (n - 1) // 2 - len(edge_set))
    neg: set[tuple[int, int]] = set()
    while len(neg) < target:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u == v:
            continue
        p = (min(u, v), max(u, v))
        if p not in edge_set:
            neg.add(p)
    pos = sorted(edge_set)
    pairs = np.array(pos + sorted(neg), dtype=np.int64).reshape(-1, 2)
    labels = np.r_[np.ones(len(pos), bool), np.zeros(len(neg), bool)]
    return pairs, labels
