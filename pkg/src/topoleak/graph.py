"""Text-attributed graphs: ingestion, transition matrix and affinity target."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GraphFormatError(ValueError):
    """Raised when an edge list or document file cannot be parsed."""


@dataclass(frozen=True)
class TextAttributedGraph:
    """Undirected simple graph on nodes ``0..n-1`` with one document per node.

    ``edges`` is stored canonically: each pair as ``(u, v)`` with ``u < v``,
    sorted, without duplicates.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    docs: tuple[str, ...] = field(default=())

    def __post_init__(self):
        canon = _canonical_edges(self.edges, self.n)
        object.__setattr__(self, "edges", canon)
        docs = tuple(self.docs) if self.docs else ("",) * self.n
        if len(docs) != self.n:
            raise ValueError(f"expected {self.n} documents, got {len(docs)}")
        object.__setattr__(self, "docs", docs)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], docs: Sequence[str] = ()):
        return cls(n, tuple((int(u), int(v)) for u, v in edges), tuple(docs))

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        if self.edges:
            e = np.asarray(self.edges)
            A[e[:, 0], e[:, 1]] = 1.0
            A[e[:, 1], e[:, 0]] = 1.0
        return A

    def neighbors(self) -> list[set[int]]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return nbrs

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def permute(self, perm: Sequence[int]) -> "TextAttributedGraph":
        """Relabel node ``i`` as ``perm[i]``."""
        perm = list(perm)
        docs = [""] * self.n
        for i, p in enumerate(perm):
            docs[p] = self.docs[i]
        return TextAttributedGraph.from_edges(
            self.n, ((perm[u], perm[v]) for u, v in self.edges), docs
        )


def _canonical_edges(edges, n: int) -> tuple[tuple[int, int], ...]:
    out = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"self-loop at node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        out.add((u, v) if u < v else (v, u))
    return tuple(sorted(out))


def _parse_id(token: str, path: Path, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GraphFormatError(f"{path}:{lineno}: cannot parse node id {token!r}") from None
    if value < 0:
        raise GraphFormatError(f"{path}:{lineno}: negative node id {value}")
    return value


def load_edge_list(path, docs_path=None) -> TextAttributedGraph:
    """Read a tab-separated edge list and an optional ``id<TAB>text`` docs file.

    Self-loops are dropped with a single warning reporting how many were seen.
    The node count is one more than the largest id in either file.
    """
    path = Path(path)
    pairs = []
    loops = 0
    max_id = -1
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected 'u<TAB>v', got {line!r}")
            u, v = (_parse_id(p.strip(), path, lineno) for p in parts)
            max_id = max(max_id, u, v)
            if u == v:
                loops += 1
                continue
            pairs.append((u, v))

    docs: dict[int, str] = {}
    if docs_path is not None:
        docs_path = Path(docs_path)
        with open(docs_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n").rstrip("\r")
                if not line.strip():
                    continue
                key, _, text = line.partition("\t")
                i = _parse_id(key.strip(), docs_path, lineno)
                docs[i] = text
                max_id = max(max_id, i)

    if loops:
        warnings.warn(f"{path}: dropped {loops} self-loop(s)", stacklevel=2)
    n = max_id + 1
    return TextAttributedGraph.from_edges(n, pairs, [docs.get(i, "") for i in range(n)])


def save_edge_list(g: TextAttributedGraph, path, docs_path=None) -> None:
    """Inverse of :func:`load_edge_list`; docs are written for every node so ``n`` survives."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v in g.edges:
            fh.write(f"{u}\t{v}\n")
    if docs_path is not None:
        with open(docs_path, "w", encoding="utf-8", newline="\n") as fh:
            for i, text in enumerate(g.docs):
                if "\n" in text or "\r" in text:
                    raise ValueError(f"document {i} contains a line break")
                fh.write(f"{i}\t{text}\n")


def transition_matrix(g: TextAttributedGraph) -> np.ndarray:
    """Row-stochastic ``D^-1 A``; rows of isolated nodes stay zero."""
    A = g.adjacency()
    deg = A.sum(axis=1)
    S = np.zeros_like(A)
    nz = deg > 0
    S[nz] = A[nz] / deg[nz, None]
    return S


def affinity(S: np.ndarray) -> np.ndarray:
    """Second-order proximity ``(S + S @ S) / 2``.

    Not symmetrized: for graphs with unequal degrees the result is asymmetric.
    """
    S = np.asarray(S, dtype=float)
    return (S + S @ S) / 2.0
