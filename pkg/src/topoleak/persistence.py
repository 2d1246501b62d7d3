"""Persistent homology of ego networks and the 8-number topological summary
appended to node embeddings."""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import TextAttributedGraph
from .simplicial import clique_lift

INF = math.inf


class FiltrationError(ValueError):
    pass


@dataclass(frozen=True)
class EgoNetwork:
    graph: TextAttributedGraph
    nodes: tuple[int, ...]  # local index -> original id
    center: int  # local index of the ego


def ego_subgraph(g: TextAttributedGraph, v: int, r: int) -> EgoNetwork:
    """Induced subgraph on nodes within ``r`` hops of ``v``."""
    if not 0 <= v < g.n:
        raise ValueError(f"node {v} out of range")
    if r < 0:
        raise ValueError("radius must be >= 0")
    nbrs = g.neighbors()
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if dist[u] == r:
            continue
        for w in nbrs[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    nodes = tuple(sorted(dist))
    local = {u: i for i, u in enumerate(nodes)}
    edges = [(local[a], local[b]) for a, b in g.edges if a in local and b in local]
    sub = TextAttributedGraph.from_edges(len(nodes), edges)
    return EgoNetwork(sub, nodes, local[v])


@dataclass(frozen=True)
class Filtration:
    """Simplices (as sorted vertex tuples) in filtration order with their values."""

    simplices: tuple[tuple[int, ...], ...]
    values: tuple[float, ...]

    def dim(self, i: int) -> int:
        return len(self.simplices[i]) - 1

    def __len__(self):
        return len(self.simplices)

    @classmethod
    def from_values(cls, values: dict) -> "Filtration":
        """Sort ``{simplex: value}`` by (value, dimension, lexicographic)."""
        items = sorted(values.items(), key=lambda kv: (kv[1], len(kv[0]), kv[0]))
        return cls(tuple(s for s, _ in items), tuple(float(x) for _, x in items))


def build_filtration(sub) -> Filtration:
    """Vertices at 0, edges at ``1 - Jaccard`` of their neighborhoods, triangles at
    the max of their edges."""
    g = sub.graph if isinstance(sub, EgoNetwork) else sub
    nbrs = g.neighbors()
    values: dict[tuple[int, ...], float] = {(i,): 0.0 for i in range(g.n)}
    for u, v in g.edges:
        inter = len(nbrs[u] & nbrs[v])
        union = len(nbrs[u] | nbrs[v])
        values[(u, v)] = 1.0 - inter / union
    for a, b, c in clique_lift(g).triangles:
        values[(a, b, c)] = max(values[(a, b)], values[(a, c)], values[(b, c)])
    return Filtration.from_values(values)


@dataclass(frozen=True)
class PersistenceDiagram:
    bars: tuple[tuple[int, float, float], ...]

    def dimension(self, d: int) -> list[tuple[float, float]]:
        return [(b, e) for k, b, e in self.bars if k == d]

    def to_csv(self) -> str:
        rows = ["dim,birth,death"]
        for d, b, e in self.bars:
            rows.append(f"{d},{b!r},{'inf' if math.isinf(e) else repr(e)}")
        return "\n".join(rows) + "\n"

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    @classmethod
    def read_csv(cls, path) -> "PersistenceDiagram":
        lines = Path(path).read_text(encoding="utf-8").splitlines()[1:]
        bars = []
        for line in lines:
            d, b, e = line.split(",")
            bars.append((int(d), float(b), float(e)))
        return cls(tuple(bars))


def _boundary_columns(f: Filtration) -> list[set[int]]:
    pos = {s: i for i, s in enumerate(f.simplices)}
    cols = []
    for j, s in enumerate(f.simplices):
        col = set()
        if len(s) > 1:
            for drop in range(len(s)):
                face = s[:drop] + s[drop + 1 :]
                i = pos.get(face)
                if i is None:
                    raise FiltrationError(f"face {face} of {s} missing from filtration")
                if i >= j or f.values[i] > f.values[j]:
                    raise FiltrationError(f"face {face} enters after its coface {s}")
                col.add(i)
        cols.append(col)
    return cols


def reduce_boundary(f: Filtration) -> tuple[list[set[int]], dict[int, int]]:
    """Standard GF(2) column reduction.

    Returns the reduced columns and the pivot map ``low row -> column``.
    """
    cols = _boundary_columns(f)
    pivot_of: dict[int, int] = {}
    for j, col in enumerate(cols):
        while col:
            low = max(col)
            k = pivot_of.get(low)
            if k is None:
                pivot_of[low] = j
                break
            col ^= cols[k]
    return cols, pivot_of


def compute_persistence(f: Filtration, max_dim: int = 1) -> PersistenceDiagram:
    """Bars ``(dim, birth, death)`` for dimensions ``0..max_dim``.

    Zero-length bars are kept; unpaired creators give ``death = inf``.
    """
    cols, pivot_of = reduce_boundary(f)
    bars = []
    for i in range(len(f)):
        if cols[i]:
            continue  # destroyer
        d = f.dim(i)
        if d > max_dim:
            continue
        j = pivot_of.get(i)
        death = f.values[j] if j is not None else INF
        bars.append((d, f.values[i], death))
    return PersistenceDiagram(tuple(bars))


def vectorize(d: PersistenceDiagram) -> np.ndarray:
    """Per dimension 0 and 1: finite-bar count, total and max finite
    persistence, infinite-bar count. Zero-length bars are ignored."""
    out = np.zeros(8)
    for dim in (0, 1):
        pers = [e - b for k, b, e in d.bars if k == dim and not math.isinf(e) and e - b > 0]
        n_inf = sum(1 for k, _, e in d.bars if k == dim and math.isinf(e))
        base = 4 * dim
        out[base] = len(pers)
        out[base + 1] = sum(pers)
        out[base + 2] = max(pers, default=0.0)
        out[base + 3] = n_inf
    return out


def node_diagram(g: TextAttributedGraph, v: int, r: int = 2) -> PersistenceDiagram:
    return compute_persistence(build_filtration(ego_subgraph(g, v, r)))


def topo_features(g: TextAttributedGraph, r: int = 2, workers: int = 1) -> np.ndarray:
    """Raw n x 8 topological summaries, one ego network per node."""
    def one(v):
        return vectorize(node_diagram(g, v, r))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(g.n)))
    else:
        rows = [one(v) for v in range(g.n)]
    return np.array(rows).reshape(g.n, 8)


def zscore_columns(F: np.ndarray) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    out = np.zeros_like(F)
    for j in range(F.shape[1]):
        col = F[:, j]
        if col.size == 0 or np.ptp(col) == 0:
            continue
        out[:, j] = (col - col.mean()) / col.std()
    return out


def augment(R, g: TextAttributedGraph, r: int = 2, workers: int = 1) -> np.ndarray:
    """Append the z-scored topological block to the embeddings ``R``."""
    R = np.asarray(R, dtype=float)
    if R.shape[0] != g.n:
        raise ValueError(f"R has {R.shape[0]} rows, graph has {g.n} nodes")
    return np.hstack([R, zscore_columns(topo_features(g, r, workers))])
