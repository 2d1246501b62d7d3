"""Planted-partition benchmark graphs with community-specific vocabularies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import TextAttributedGraph


@dataclass(frozen=True)
class PlantedSpec:
    n: int = 60
    communities: int = 2
    p_in: float = 0.3
    p_out: float = 0.02
    vocab_per_community: int = 20
    noise_vocab: int = 20
    words_per_doc: int = 30
    noise_rate: float = 0.3

    def __post_init__(self):
        for name in ("p_in", "p_out", "noise_rate"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.n < 1 or self.communities < 1:
            raise ValueError("n and communities must be positive")


def community_labels(n: int, communities: int) -> np.ndarray:
    """Contiguous, near-equal blocks: node i belongs to ``i * c // n``."""
    return (np.arange(n) * communities) // n


def generate_planted(spec: PlantedSpec, seed: int = 0) -> tuple[TextAttributedGraph, np.ndarray]:
    """Sample a planted-partition graph and bag-of-words documents.

    Pairs are visited in ``(u, v)`` lexicographic order with one Bernoulli draw
    each. Each word of a document is a shared noise word with probability
    ``noise_rate`` and a word from the node's community vocabulary otherwise.
    """
    rng = np.random.default_rng(seed)
    n = spec.n
    labels = community_labels(n, spec.communities)
    iu, ju = np.triu_indices(n, k=1)
    same = labels[iu] == labels[ju]
    p = np.where(same, spec.p_in, spec.p_out)
    keep = rng.random(iu.size) < p
    edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))

    docs = []
    for i in range(n):
        noisy = rng.random(spec.words_per_doc) < spec.noise_rate
        comm = rng.integers(0, max(spec.vocab_per_community, 1), size=spec.words_per_doc)
        noise = rng.integers(0, max(spec.noise_vocab, 1), size=spec.words_per_doc)
        words = []
        for is_noise, c, z in zip(noisy, comm, noise):
            if is_noise and spec.noise_vocab > 0:
                words.append(f"noise{z}")
            elif spec.vocab_per_community > 0:
                words.append(f"c{labels[i]}w{c}")
        docs.append(" ".join(words))
    return TextAttributedGraph.from_edges(n, edges, docs), labels
