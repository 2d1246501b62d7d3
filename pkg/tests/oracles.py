"""Brute-force reference computations, deliberately independent of the package code paths."""

import itertools

import numpy as np


def matmul_loops(A, B):
    A, B = np.asarray(A, float), np.asarray(B, float)
    n, k = A.shape
    m = B.shape[1]
    out = np.zeros((n, m))
    for i in range(n):
        for j in range(m):
            s = 0.0
            for r in range(k):
                s += A[i, r] * B[r, j]
            out[i, j] = s
    return out


def random_graph_edges(rng, n, p):
    return [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]


def adjacency(n, edges):
    A = np.zeros((n, n))
    for u, v in edges:
        A[u, v] = A[v, u] = 1
    return A


def triangles_brute(n, edges):
    es = {tuple(sorted(e)) for e in edges}
    return [t for t in itertools.combinations(range(n), 3)
            if {(t[0], t[1]), (t[0], t[2]), (t[1], t[2])} <= es]


def gf2_rank(M):
    """Rank over GF(2) by row elimination on a dense 0/1 copy."""
    A = (np.abs(np.asarray(M)) % 2).astype(np.uint8)
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if A[r, c]), None)
        if pivot is None:
            continue
        A[[rank, pivot]] = A[[pivot, rank]]
        for r in range(rows):
            if r != rank and A[r, c]:
                A[r] ^= A[rank]
        rank += 1
    return rank


def boundary_dense(n, edges, tris):
    """Oriented boundary matrices built straight from the definition."""
    E = sorted(tuple(sorted(e)) for e in edges)
    idx = {e: i for i, e in enumerate(E)}
    d1 = np.zeros((n, len(E)), dtype=int)
    for j, (u, w) in enumerate(E):
        d1[u, j] -= 1
        d1[w, j] += 1
    d2 = np.zeros((len(E), len(tris)), dtype=int)
    for j, t in enumerate(tris):
        for drop in range(3):
            face = t[:drop] + t[drop + 1:]
            d2[idx[face], j] += (-1) ** drop
    return d1, d2


def betti_brute(n, edges, tris, rank=gf2_rank):
    d1, d2 = boundary_dense(n, edges, tris)
    r1 = rank(d1) if len(edges) else 0
    r2 = rank(d2) if len(tris) else 0
    return {
        "creators0": n,  # rank(d0) = 0
        "creators1": len(edges) - r1,
        "betti0": n - r1,
        "betti1": len(edges) - r1 - r2,
    }


def central_difference(f, x, h=1e-5):
    g = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        i = it.multi_index
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (f(xp) - f(xm)) / (2 * h)
    return g


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-300)


def auc_pairs(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l]
    neg = [s for s, l in zip(scores, labels) if not l]
    total = 0.0
    for p in pos:
        for q in neg:
            total += 1.0 if p > q else 0.5 if p == q else 0.0
    return total / (len(pos) * len(neg))
