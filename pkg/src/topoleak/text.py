"""Node documents to a dense low-dimensional text feature matrix ``T`` (t x n)."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

_TOKEN = re.compile(r"[^\W_]+")


def tokenize(doc: str) -> list[str]:
    return _TOKEN.findall(doc.lower())


def build_tfidf(docs: Sequence[str]) -> tuple[np.ndarray, list[str]]:
    """Term-document matrix with raw counts weighted by ``ln(n / df)``.

    Returns ``(X, vocab)`` where ``X`` is ``len(vocab) x n`` and ``vocab`` is
    sorted. Terms present in every document end up with zero rows.
    """
    n = len(docs)
    counts = [Counter(tokenize(d)) for d in docs]
    vocab = sorted(set().union(*counts)) if counts else []
    index = {w: i for i, w in enumerate(vocab)}
    X = np.zeros((len(vocab), n))
    df = np.zeros(len(vocab))
    for j, c in enumerate(counts):
        for w, tf in c.items():
            X[index[w], j] = tf
            df[index[w]] += 1
    if vocab:
        X *= np.log(n / df)[:, None]
    return X, vocab


@dataclass
class TextFeatureMatrix:
    T: np.ndarray
    vocab: list[str]

    @property
    def t(self) -> int:
        return self.T.shape[0]

    def to_csv(self, path) -> None:
        np.savetxt(path, self.T, delimiter=",", fmt="%.17g")


def _orthonormalize(Y: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(Y)
    # fix QR sign ambiguity so iterates are reproducible
    s = np.sign(np.diag(R))
    s[s == 0] = 1.0
    return Q * s


def top_eigenpairs(G: np.ndarray, k: int, seed: int = 0, max_iter: int = 300,
                   tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Leading ``k`` eigenpairs of a symmetric PSD matrix by subspace iteration.

    Each sweep applies ``G`` to an orthonormal block, then does a Rayleigh-Ritz
    projection. Stops once every Ritz residual ``||G v - lam v||`` is below
    ``tol * lam_max`` (this bounds the subspace angle), or after ``max_iter``
    sweeps. Eigenvalues are returned in descending order.
    """
    n = G.shape[0]
    k = min(k, n)
    if k == 0:
        return np.zeros(0), np.zeros((n, 0))
    rng = np.random.default_rng(seed)
    Q = _orthonormalize(rng.standard_normal((n, k)))
    lam = np.zeros(k)
    V = Q
    for _ in range(max_iter):
        Z = G @ Q
        lam, U = np.linalg.eigh(Q.T @ Z)
        lam, U = lam[::-1], U[:, ::-1]
        V = Q @ U
        resid = np.linalg.norm(Z @ U - V * lam, axis=0)
        scale = max(abs(lam[0]), np.finfo(float).tiny)
        if resid.max() <= tol * scale:
            break
        Q = _orthonormalize(Z @ U)
    # deterministic sign: largest-magnitude entry of each vector positive
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return lam, V * signs


def reduce_to_t(X: np.ndarray, t: int, seed: int = 0, vocab: Sequence[str] = ()) -> TextFeatureMatrix:
    """Rank-``t`` reduction ``T = diag(sqrt(eig(X^T X))) V^T`` so ``T^T T ~ X^T X``.

    Rows past the numerical rank of ``X`` (or past ``n``) are exactly zero.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    X = np.asarray(X, dtype=float)
    n = X.shape[1]
    T = np.zeros((t, n))
    if X.size == 0 or n == 0:
        return TextFeatureMatrix(T, list(vocab))
    G = X.T @ X
    lam, V = top_eigenpairs(G, t, seed=seed)
    cutoff = max(lam[0], 0.0) * n * np.finfo(float).eps * 10
    keep = lam > cutoff
    T[: len(lam)][keep] = np.sqrt(lam[keep])[:, None] * V[:, keep].T
    return TextFeatureMatrix(T, list(vocab))


def text_features(docs: Sequence[str], t: int, seed: int = 0) -> TextFeatureMatrix:
    X, vocab = build_tfidf(docs)
    return reduce_to_t(X, t, seed=seed, vocab=vocab)
