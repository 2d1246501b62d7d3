"""Graph reconstruction by inverting a one-layer graph decoder.

The adversary fits a symmetric logit matrix ``Z`` (the candidate adjacency)
and a weight matrix ``Theta`` so that ``tanh(rownorm(A_hat + I) X Theta)``
reproduces the released representations, where ``A_hat = sigmoid(Z)`` with
the diagonal masked out. ``sigmoid(Z)`` then scores every node pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


@dataclass
class DecoderState:
    Z: np.ndarray
    theta: np.ndarray
    loss_trace: list[float] = field(default_factory=list)

    @property
    def edge_scores(self) -> np.ndarray:
        S = _sigmoid(self.Z)
        np.fill_diagonal(S, 0.0)
        return S


def _propagation(Z):
    n = Z.shape[0]
    S = _sigmoid(Z)
    A = S * (1.0 - np.eye(n)) + np.eye(n)
    d = A.sum(axis=1)
    return S, A, d, A / d[:, None]


def decoder_forward(Z, theta, X) -> np.ndarray:
    P = _propagation(Z)[3]
    return np.tanh(P @ X @ theta)


def decoder_loss(Z, theta, X, R) -> float:
    F = decoder_forward(Z, theta, X)
    return float(np.sum((F - R) ** 2))


def decoder_gradients(Z, theta, X, R):
    """Loss and analytic gradients w.r.t. (unconstrained) ``Z`` and ``theta``."""
    n = Z.shape[0]
    S, A, d, P = _propagation(Z)
    Y = X @ theta
    F = np.tanh(P @ Y)
    diff = F - R
    loss = float(np.sum(diff ** 2))
    G_pre = 2.0 * diff * (1.0 - F ** 2)
    g_theta = (P @ X).T @ G_pre
    G_P = G_pre @ Y.T
    G_A = (G_P - np.sum(G_P * P, axis=1, keepdims=True)) / d[:, None]
    g_Z = G_A * S * (1.0 - S) * (1.0 - np.eye(n))
    return loss, g_Z, g_theta


def _symmetrize(Z):
    return (Z + Z.T) / 2.0


def similarity_logits(R) -> np.ndarray:
    """Standardized off-diagonal cosine similarities of the rows of ``R``."""
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    norms = np.linalg.norm(R, axis=1, keepdims=True)
    Rn = np.divide(R, norms, out=np.zeros_like(R), where=norms > 0)
    C = Rn @ Rn.T
    off = ~np.eye(n, dtype=bool)
    sd = C[off].std()
    Z = (C - C[off].mean()) / sd if sd > 0 else np.zeros_like(C)
    Z = _symmetrize(Z)
    np.fill_diagonal(Z, 0.0)
    return Z


def init_decoder(n: int, f: int, d: int, seed: int = 0, R=None) -> DecoderState:
    """Seeded initial state; with ``R`` the logits start from row similarities
    instead of small noise."""
    rng = np.random.default_rng(seed)
    Z = _symmetrize(rng.normal(0.0, 0.1, size=(n, n)))
    theta = rng.normal(0.0, 1.0 / np.sqrt(max(f, 1)), size=(f, d))
    if R is not None:
        Z = similarity_logits(R)
    np.fill_diagonal(Z, 0.0)
    return DecoderState(Z, theta, [])


def _backtrack(loss0, point, grad, evaluate, lr, max_halvings=20):
    step = lr
    for _ in range(max_halvings + 1):
        cand = point - step * grad
        loss = evaluate(cand)
        if loss <= loss0:
            return cand, loss
        step /= 2.0
    return point, loss0


def decoder_gra(R_target, X=None, steps: int = 500, lr: float = 0.5, seed: int = 0,
                known_features: bool = True, init: str = "similarity") -> DecoderState:
    """Fit the decoder to ``R_target`` by alternating descent on ``theta`` then ``Z``.

    Each half-step halves its step size until the loss does not increase
    (at most 20 halvings, otherwise the half-step is skipped), so
    ``loss_trace`` is non-increasing. With ``known_features=False`` (or no
    ``X``) the identity replaces the node features. ``init`` is
    ``"similarity"`` (logits from cosine similarity of the target rows) or
    ``"random"``.
    """
    R = np.asarray(R_target, dtype=float)
    n = R.shape[0]
    if n < 2:
        raise ValueError("decoder_gra needs at least 2 nodes")
    if X is None or not known_features:
        X = np.eye(n)
    X = np.asarray(X, dtype=float)
    if init not in ("similarity", "random"):
        raise ValueError(f"unknown init {init!r}")
    state = init_decoder(n, X.shape[1], R.shape[1], seed,
                         R=R if init == "similarity" else None)
    Z, theta = state.Z, state.theta
    loss = decoder_loss(Z, theta, X, R)
    trace = [loss]
    for _ in range(steps):
        loss, _, g_theta = decoder_gradients(Z, theta, X, R)
        theta, loss = _backtrack(loss, theta, g_theta,
                                 lambda th: decoder_loss(Z, th, X, R), lr)
        loss, g_Z, _ = decoder_gradients(Z, theta, X, R)
        g_Z = _symmetrize(g_Z)
        Z, loss = _backtrack(loss, Z, g_Z,
                             lambda z: decoder_loss(z, theta, X, R), lr)
        Z = _symmetrize(Z)
        trace.append(loss)
    return DecoderState(Z, theta, trace)
