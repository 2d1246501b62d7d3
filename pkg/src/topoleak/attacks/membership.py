"""Shadow-model membership inference against a node classifier.

Target and shadow models are single-layer softmax classifiers on the released
representations. The attacker trains a shadow model on nodes whose membership
it controls, learns how member outputs differ from non-member outputs, and
transfers that rule to the target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..metrics import auc


@dataclass
class SoftmaxClassifier:
    weights: np.ndarray  # d x C
    bias: np.ndarray  # C

    @property
    def n_classes(self) -> int:
        return self.bias.shape[0]

    @classmethod
    def uniform(cls, d: int, n_classes: int) -> "SoftmaxClassifier":
        return cls(np.zeros((d, n_classes)), np.zeros(n_classes))

    def logits(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.weights + self.bias

    def predict_proba(self, X) -> np.ndarray:
        z = self.logits(X)
        z -= z.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)

    def accuracy(self, X, y) -> float:
        return float(np.mean(self.predict(X) == np.asarray(y)))


def train_softmax(R, labels, ids, epochs: int = 500, lr: float = 0.5, seed: int = 0,
                  n_classes: int | None = None, l2: float = 0.0) -> SoftmaxClassifier:
    """Full-batch gradient descent on mean cross-entropy over the rows ``ids``."""
    R = np.asarray(R, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    ids = np.asarray(ids, dtype=np.int64)
    if ids.size == 0:
        raise ValueError("empty training set")
    y = labels[ids]
    if np.unique(y).size < 2:
        raise ValueError("training set must contain at least two classes")
    C = int(labels.max()) + 1 if n_classes is None else n_classes
    X = R[ids]
    rng = np.random.default_rng(seed)
    clf = SoftmaxClassifier(rng.normal(0.0, 0.01, size=(R.shape[1], C)), np.zeros(C))
    Y = np.eye(C)[y]
    m = len(ids)
    for _ in range(epochs):
        G = (clf.predict_proba(X) - Y) / m
        clf.weights -= lr * (X.T @ G + l2 * clf.weights)
        clf.bias -= lr * G.sum(axis=0)
    return clf


def membership_features(probs, labels) -> np.ndarray:
    """Per row: top-3 confidences (descending, zero padded) and the true-label loss."""
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    top = -np.sort(-probs, axis=1)[:, :3]
    if top.shape[1] < 3:
        top = np.hstack([top, np.zeros((top.shape[0], 3 - top.shape[1]))])
    p_true = probs[np.arange(len(labels)), labels]
    loss = -np.log(np.clip(p_true, 1e-12, 1.0))
    return np.column_stack([top, loss])


@dataclass
class MembershipReport:
    auc: float
    accuracy: float
    scores: np.ndarray
    is_member: np.ndarray
    shadow_train_accuracy: float
    shadow_holdout_accuracy: float


def membership_inference(target: SoftmaxClassifier, R, labels, member_ids, nonmember_ids,
                         shadow_ids, seed: int = 0, epochs: int = 500,
                         lr: float = 0.5) -> MembershipReport:
    """Attack ``target`` using one shadow model trained on half of ``shadow_ids``.

    The attack model is logistic regression on standardized membership
    features. Reports AUC and accuracy at 0.5 on the target's member and
    non-member nodes.
    """
    member_ids = np.asarray(member_ids, dtype=np.int64)
    nonmember_ids = np.asarray(nonmember_ids, dtype=np.int64)
    shadow_ids = np.asarray(shadow_ids, dtype=np.int64)
    if min(member_ids.size, nonmember_ids.size) == 0 or shadow_ids.size < 2:
        raise ValueError("member, non-member and shadow splits must be non-empty")
    sm, snm, ss = set(member_ids.tolist()), set(nonmember_ids.tolist()), set(shadow_ids.tolist())
    if sm & snm or ss & (sm | snm):
        raise ValueError("member, non-member and shadow splits must be disjoint")
    R = np.asarray(R, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    C = target.n_classes

    rng = np.random.default_rng(seed)
    perm = rng.permutation(shadow_ids)
    half = len(perm) // 2
    s_in, s_out = np.sort(perm[:half]), np.sort(perm[half:])
    shadow = train_softmax(R, labels, s_in, epochs=epochs, lr=lr, seed=seed + 1, n_classes=C)

    rec_ids = np.r_[s_in, s_out]
    rec_y = np.r_[np.ones(len(s_in), np.int64), np.zeros(len(s_out), np.int64)]
    feats = membership_features(shadow.predict_proba(R[rec_ids]), labels[rec_ids])
    mu = feats.mean(axis=0)
    sd = feats.std(axis=0)
    sd[sd == 0] = 1.0
    attack = train_softmax((feats - mu) / sd, rec_y, np.arange(len(rec_y)),
                           epochs=epochs, lr=lr, seed=seed + 2, n_classes=2)

    eval_ids = np.r_[member_ids, nonmember_ids]
    is_member = np.r_[np.ones(len(member_ids), bool), np.zeros(len(nonmember_ids), bool)]
    tf = membership_features(target.predict_proba(R[eval_ids]), labels[eval_ids])
    scores = attack.predict_proba((tf - mu) / sd)[:, 1]
    return MembershipReport(
        auc=auc(scores, is_member),
        accuracy=float(np.mean((scores >= 0.5) == is_member)),
        scores=scores,
        is_member=is_member,
        shadow_train_accuracy=shadow.accuracy(R[s_in], labels[s_in]),
        shadow_holdout_accuracy=shadow.accuracy(R[s_out], labels[s_out]),
    )
