"""Clique complexes up to triangles, boundary operators, Hodge Laplacians and
the simplicial propagation encoder that produces the SNN representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sps

from .graph import TextAttributedGraph


@dataclass(frozen=True)
class SimplicialComplex:
    n: int
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...] = ()
    edge_index: dict = field(init=False, repr=False, compare=False)
    triangle_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edge_index", {e: i for i, e in enumerate(self.edges)})
        object.__setattr__(self, "triangle_index", {t: i for i, t in enumerate(self.triangles)})

    def count(self, p: int) -> int:
        return (self.n, len(self.edges), len(self.triangles))[p] if 0 <= p <= 2 else 0

    def to_text(self) -> str:
        lines = ["[edges]"]
        lines += [f"{u}\t{v}" for u, v in self.edges]
        lines.append("[triangles]")
        lines += [f"{a}\t{b}\t{c}" for a, b, c in self.triangles]
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")


def clique_lift(g: TextAttributedGraph, max_dim: int = 2) -> SimplicialComplex:
    """Clique complex of ``g`` truncated at ``max_dim`` (1 or 2).

    Triangles are enumerated as ``u < v < w`` with ``w`` a common higher
    neighbor of the edge ``(u, v)``, so the output is lexicographic.
    """
    if max_dim not in (1, 2):
        raise ValueError("max_dim must be 1 or 2")
    edges = g.edges
    triangles = []
    if max_dim == 2:
        nbrs = g.neighbors()
        for u, v in edges:
            for w in sorted(nbrs[u] & nbrs[v]):
                if w > v:
                    triangles.append((u, v, w))
        triangles.sort()
    return SimplicialComplex(g.n, edges, tuple(triangles))


def boundary(cx: SimplicialComplex, p: int) -> sps.csr_array:
    """Signed boundary matrix with orientation from ascending vertex ids.

    ``p=1``: n x |E|, column ``(u, w)`` is ``e_w - e_u``.
    ``p=2``: |E| x |Tri|, column ``(a, b, c)`` is ``(b,c) - (a,c) + (a,b)``.
    """
    if p == 1:
        m = len(cx.edges)
        rows = np.empty(2 * m, dtype=np.int64)
        cols = np.repeat(np.arange(m), 2)
        vals = np.tile(np.array([-1, 1], dtype=np.int64), m)
        for j, (u, w) in enumerate(cx.edges):
            rows[2 * j] = u
            rows[2 * j + 1] = w
        return sps.csr_array((vals, (rows, cols)), shape=(cx.n, m), dtype=np.int64)
    if p == 2:
        m = len(cx.triangles)
        idx = cx.edge_index
        rows = np.empty(3 * m, dtype=np.int64)
        cols = np.repeat(np.arange(m), 3)
        vals = np.tile(np.array([1, -1, 1], dtype=np.int64), m)
        for j, (a, b, c) in enumerate(cx.triangles):
            rows[3 * j : 3 * j + 3] = idx[(b, c)], idx[(a, c)], idx[(a, b)]
        return sps.csr_array((vals, (rows, cols)), shape=(len(cx.edges), m), dtype=np.int64)
    raise ValueError("p must be 1 or 2")


def hodge_laplacian(cx: SimplicialComplex, p: int) -> np.ndarray:
    """Dense ``L0 = d1 d1^T`` or ``L1 = d1^T d1 + d2 d2^T`` (float)."""
    d1 = boundary(cx, 1)
    if p == 0:
        L = d1 @ d1.T
    elif p == 1:
        d2 = boundary(cx, 2)
        L = d1.T @ d1 + d2 @ d2.T
    else:
        raise ValueError("p must be 0 or 1")
    return np.asarray(L.toarray(), dtype=float)


def estimate_lambda_max(L: np.ndarray, seed: int = 0, steps: int = 100) -> float:
    """Rayleigh quotient after ``steps`` rounds of power iteration; 1.0 when ``L == 0``."""
    m = L.shape[0]
    if m == 0 or not np.any(L):
        return 1.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(m)
    x /= np.linalg.norm(x)
    for _ in range(steps):
        y = L @ x
        ny = np.linalg.norm(y)
        if ny == 0:
            # start vector fell in the kernel
            x = rng.standard_normal(m)
            x /= np.linalg.norm(x)
            continue
        x = y / ny
    lam = float(x @ L @ x)
    return lam if lam > 0 else 1.0


def propagation_operator(L: np.ndarray, seed: int = 0, spectral: str = "power") -> np.ndarray:
    """``I - L / lam_max`` with eigenvalues in ``[-1, 1]``.

    ``spectral="power"`` estimates ``lam_max`` with seeded power iteration;
    ``"exact"`` uses a dense symmetric eigensolver.
    """
    if spectral == "power":
        lam = estimate_lambda_max(L, seed=seed)
    elif spectral == "exact":
        lam = float(np.linalg.eigvalsh(L)[-1]) if L.size and np.any(L) else 1.0
    else:
        raise ValueError(f"unknown spectral mode {spectral!r}")
    return np.eye(L.shape[0]) - L / lam


@dataclass
class SNNWeights:
    theta0: list[np.ndarray]
    theta1: list[np.ndarray]
    seed: int = 0

    @property
    def layers(self) -> int:
        return len(self.theta0)

    @classmethod
    def init(cls, d_in: int, layers: int = 2, hidden: int | None = None, seed: int = 0):
        """Glorot-uniform weights; hidden width defaults to the input width."""
        hidden = d_in if hidden is None else hidden
        rng = np.random.default_rng(seed)
        theta0, theta1 = [], []
        d = d_in
        for _ in range(layers):
            s = np.sqrt(6.0 / (d + hidden))
            theta0.append(rng.uniform(-s, s, size=(d, hidden)))
            theta1.append(rng.uniform(-s, s, size=(d, hidden)))
            d = hidden
        return cls(theta0, theta1, seed)

    @classmethod
    def zeros(cls, d_in: int, layers: int = 2, hidden: int | None = None):
        hidden = d_in if hidden is None else hidden
        dims = [d_in] + [hidden] * layers
        z = [np.zeros((a, b)) for a, b in zip(dims[:-1], dims[1:])]
        return cls(z, [w.copy() for w in z], 0)


def snn_forward(cx: SimplicialComplex, X0, weights: SNNWeights,
                spectral: str = "power") -> np.ndarray:
    """Propagate node features over vertices and edges, then pool edges to nodes.

    Edge signals are oriented: they start as half the endpoint difference
    ``d1^T X0 / 2`` and are pooled back with the signed incidence, so
    reversing an edge's orientation flips its signal and L1 consistently and
    the node output does not depend on vertex labels. Each layer applies
    ``tanh(P_p X_p Theta_p)`` for p in {0, 1}. Output row v is
    ``[X0[v], mean over incident edges of d1[v, e] * X1[e]]`` (zeros if isolated).

    The power-iteration estimate of ``lam_max`` depends on its seeded start
    vector, so relabeled inputs agree only to that estimate's accuracy;
    ``spectral="exact"`` removes the dependence.
    """
    X0 = np.asarray(X0, dtype=float)
    if X0.shape[0] != cx.n:
        raise ValueError(f"X0 has {X0.shape[0]} rows, expected {cx.n}")
    d1 = boundary(cx, 1).astype(float)  # n x |E|
    X1 = (d1.T @ X0) / 2.0
    P0 = propagation_operator(hodge_laplacian(cx, 0), weights.seed, spectral)
    P1 = propagation_operator(hodge_laplacian(cx, 1), weights.seed, spectral)
    for th0, th1 in zip(weights.theta0, weights.theta1):
        X0 = np.tanh(P0 @ X0 @ th0)
        X1 = np.tanh(P1 @ X1 @ th1)
    deg = np.asarray(abs(d1).sum(axis=1)).ravel()
    pooled = np.zeros((cx.n, X1.shape[1]))
    nz = deg > 0
    pooled[nz] = (d1 @ X1)[nz] / deg[nz, None]
    return np.hstack([X0, pooled])


def gcn_forward(g: TextAttributedGraph, X0, weights: SNNWeights) -> np.ndarray:
    """Pairwise baseline: ``tanh(D^-1/2 (A+I) D^-1/2 X Theta)`` per layer.

    Uses only ``theta0``; output width equals the hidden width.
    """
    X = np.asarray(X0, dtype=float)
    A = g.adjacency() + np.eye(g.n)
    d = 1.0 / np.sqrt(A.sum(axis=1))
    P = d[:, None] * A * d[None, :]
    for th in weights.theta0:
        X = np.tanh(P @ X @ th)
    return X


def betti_numbers(cx: SimplicialComplex) -> tuple[int, int]:
    """(beta0, beta1) from ranks of the boundary matrices."""
    r1 = np.linalg.matrix_rank(boundary(cx, 1).toarray()) if cx.edges else 0
    r2 = np.linalg.matrix_rank(boundary(cx, 2).toarray()) if cx.triangles else 0
    return cx.n - r1, len(cx.edges) - r1 - r2
