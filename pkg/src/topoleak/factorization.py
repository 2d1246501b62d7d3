"""Inductive three-matrix factorization ``M ~ W^T H T`` and 2k-dim node embeddings.

W is k x n (one latent column per node), H is k x t and T is the fixed t x n
text feature matrix. Each sweep solves the ridge problem for W, then for H,
then rebalances the pair without changing ``W^T H``. All three steps are exact
minimizers of their block, so the regularized objective never increases.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

MAGIC = "RT4SC1"


class FactorizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class FactorizationConfig:
    k: int = 40
    lam: float = 0.2
    max_iters: int = 50
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")


@dataclass
class FactorModel:
    W: np.ndarray
    H: np.ndarray
    objective_trace: list[float] = field(default_factory=list)
    seed: int = 0

    @property
    def k(self) -> int:
        return self.W.shape[0]

    @property
    def n(self) -> int:
        return self.W.shape[1]

    @property
    def t(self) -> int:
        return self.H.shape[1]


def _check_shapes(M, T, W, H):
    n = M.shape[0]
    k = W.shape[0]
    if M.shape != (n, n):
        raise ValueError(f"M must be square, got {M.shape}")
    if T.shape[1] != n:
        raise ValueError(f"T has {T.shape[1]} columns, expected {n}")
    if W.shape != (k, n):
        raise ValueError(f"W has shape {W.shape}, expected ({k}, {n})")
    if H.shape != (k, T.shape[0]):
        raise ValueError(f"H has shape {H.shape}, expected ({k}, {T.shape[0]})")


def objective(M, T, W, H, lam: float) -> float:
    """``||M - W^T H T||_F^2 + lam * (||W||_F^2 + ||H||_F^2)``."""
    M, T, W, H = (np.asarray(a, dtype=float) for a in (M, T, W, H))
    _check_shapes(M, T, W, H)
    E = M - W.T @ (H @ T)
    return float(np.sum(E * E) + lam * (np.sum(W * W) + np.sum(H * H)))


def gradients(M, T, W, H, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradients of :func:`objective` with respect to W and H."""
    E = M - W.T @ (H @ T)
    gW = -2.0 * (H @ T) @ E.T + 2.0 * lam * W
    gH = -2.0 * W @ E @ T.T + 2.0 * lam * H
    return gW, gH


def _solve_W(M, B, lam):
    k = B.shape[0]
    A = B @ B.T + lam * np.eye(k)
    if lam == 0 and np.linalg.matrix_rank(A) < k:
        raise FactorizationError("W update is singular with lambda=0; use lambda > 0")
    return np.linalg.solve(A, B @ M.T)


def _solve_H(M, T, W, lam, TTt_eig):
    # Exact minimizer of ||M - W^T H T||^2 + lam ||H||^2: the normal equations
    # (W W^T) H (T T^T) + lam H = W M T^T decouple in the two eigenbases.
    a, P = np.linalg.eigh(W @ W.T)
    b, Q = TTt_eig
    a = np.clip(a, 0.0, None)
    denom = np.outer(a, b) + lam
    if lam == 0 and np.any(denom <= 1e-12 * max(denom.max(), 1.0)):
        raise FactorizationError("H update is singular with lambda=0; use lambda > 0")
    C = P.T @ (W @ M @ T.T) @ Q
    return P @ (C / denom) @ Q.T


def _balance(W, H):
    # Among all (W', H') with W'^T H' = W^T H, the SVD split minimizes
    # ||W'||^2 + ||H'||^2; signs are pinned on the H side so that node
    # relabelings leave them unchanged.
    k = W.shape[0]
    U, s, Vt = np.linalg.svd(W.T @ H, full_matrices=False)
    U, s, Vt = U[:, :k], s[:k], Vt[:k]
    idx = np.argmax(np.abs(Vt), axis=1)
    sign = np.sign(Vt[np.arange(len(idx)), idx])
    sign[sign == 0] = 1.0
    root = np.sqrt(s)
    Wb = np.zeros_like(W)
    Hb = np.zeros_like(H)
    Wb[: len(s)] = (U * (root * sign)).T
    Hb[: len(s)] = (root * sign)[:, None] * Vt
    return Wb, Hb


def init_factors(n: int, t: int, k: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    W = rng.uniform(-0.1, 0.1, size=(k, n))
    H = rng.uniform(-0.1, 0.1, size=(k, t))
    return W, H


def factorize(M, T, cfg: FactorizationConfig = FactorizationConfig(), init=None) -> FactorModel:
    """Fit W and H by alternating ridge solves.

    ``init`` optionally supplies ``(W0, H0)``; otherwise both are drawn from
    uniform(-0.1, 0.1) with ``cfg.seed``. Iteration stops after
    ``cfg.max_iters`` sweeps or once the relative objective decrease drops
    below ``cfg.tol``.
    """
    M = np.asarray(M, dtype=float)
    T = np.asarray(T, dtype=float)
    n = M.shape[0]
    t = T.shape[0]
    if n < 1 or t < 1:
        raise ValueError("need n >= 1 and t >= 1")
    if init is None:
        W, H = init_factors(n, t, cfg.k, cfg.seed)
    else:
        W, H = (np.array(a, dtype=float) for a in init)
    _check_shapes(M, T, W, H)

    lam = cfg.lam
    b, Q = np.linalg.eigh(T @ T.T)
    TTt_eig = (np.clip(b, 0.0, None), Q)
    trace = [objective(M, T, W, H, lam)]
    for it in range(cfg.max_iters):
        W = _solve_W(M, H @ T, lam)
        H = _solve_H(M, T, W, lam, TTt_eig)
        if lam > 0:
            W, H = _balance(W, H)
        trace.append(objective(M, T, W, H, lam))
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(H))):
            raise FactorizationError(f"non-finite factors at iteration {it + 1}")
        prev, cur = trace[-2], trace[-1]
        if prev - cur < cfg.tol * max(abs(prev), np.finfo(float).tiny):
            break
    log.debug("factorize: %d iterations, objective %.6g", len(trace) - 1, trace[-1])
    return FactorModel(W, H, trace, cfg.seed)


def embed(model: FactorModel, T, normalize: bool = False) -> np.ndarray:
    """Rows ``[W[:, i], (H T)[:, i]]``, shape n x 2k."""
    T = np.asarray(T, dtype=float)
    R = np.hstack([model.W.T, (model.H @ T).T])
    if normalize:
        norms = np.linalg.norm(R, axis=1, keepdims=True)
        R = np.divide(R, norms, out=np.zeros_like(R), where=norms > 0)
    return R


def save_model(model: FactorModel, path) -> None:
    lines = [MAGIC, f"k={model.k} t={model.t} n={model.n} seed={model.seed}"]
    for name, A in (("W", model.W), ("H", model.H)):
        lines.append(f"[{name}]")
        lines.extend(",".join(repr(float(x)) for x in row) for row in A)
    lines.append("[trace]")
    lines.append(",".join(repr(float(x)) for x in model.objective_trace))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path) -> FactorModel:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text or text[0] != MAGIC:
        raise ValueError(f"{path}: not a {MAGIC} model file")
    header = dict(item.split("=") for item in text[1].split())
    k, t, n, seed = (int(header[key]) for key in ("k", "t", "n", "seed"))
    sections: dict[str, list[str]] = {}
    current = None
    for line in text[2:]:
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections[current] = []
        elif current is not None and line:
            sections[current].append(line)

    def rows(name, shape):
        data = [[float(x) for x in r.split(",")] for r in sections.get(name, [])]
        A = np.array(data, dtype=float).reshape(shape)
        return A

    W = rows("W", (k, n))
    H = rows("H", (k, t))
    tr = sections.get("trace", [])
    trace = [float(x) for x in tr[0].split(",")] if tr else []
    return FactorModel(W, H, trace, seed)
