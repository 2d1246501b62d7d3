"""End-to-end experiment: build every representation family, attack each one,
and tabulate AUC / precision@k."""

from __future__ import annotations

import csv
import io
import json
import logging
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .attacks import (
    SoftmaxClassifier,
    candidate_pairs,
    decoder_gra,
    distance_edge_attack,
    membership_inference,
    train_softmax,
)
from .config import ExperimentConfig
from .factorization import FactorModel, embed, factorize
from .graph import TextAttributedGraph, affinity, load_edge_list, transition_matrix
from .metrics import auc, precision_at_k
from .persistence import augment
from .simplicial import SNNWeights, clique_lift, gcn_forward, snn_forward
from .synthetic import generate_planted
from .text import TextFeatureMatrix, text_features

log = logging.getLogger(__name__)


class PipelineError(RuntimeError):
    """A stage failed; the message is prefixed with the module name."""


def _stage(module: str):
    def wrap(fn):
        def inner(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except PipelineError:
                raise
            except Exception as exc:  # noqa: BLE001 - re-tagged for the CLI
                raise PipelineError(f"[{module}] {type(exc).__name__}: {exc}") from exc
        inner.__name__ = fn.__name__
        inner.__doc__ = fn.__doc__
        return inner
    return wrap


@_stage("graph-core")
def load_graph(cfg: ExperimentConfig) -> tuple[TextAttributedGraph, np.ndarray | None]:
    """Graph from the configured files, or a planted-partition sample seeded by ``cfg.seed``."""
    if cfg.edges:
        g = load_edge_list(cfg.edges, cfg.docs)
        labels = None
        if cfg.labels:
            labels = np.zeros(g.n, dtype=np.int64)
            for line in Path(cfg.labels).read_text(encoding="utf-8").splitlines():
                if line.strip():
                    i, lab = line.split("\t")
                    labels[int(i)] = int(lab)
        return g, labels
    return generate_planted(cfg.planted, seed=cfg.seed)


@dataclass
class Representations:
    graph: TextAttributedGraph
    text: TextFeatureMatrix
    model: FactorModel
    families: dict[str, np.ndarray] = field(default_factory=dict)


@_stage("factorization")
def _factorize(g, cfg):
    tf = text_features(g.docs, cfg.t, seed=cfg.seed)
    M = affinity(transition_matrix(g))
    model = factorize(M, tf.T, cfg.factorization)
    return tf, model


@_stage("persistence")
def _augment(R, g, cfg, workers):
    return augment(R, g, cfg.radius, workers=workers)


@_stage("simplicial")
def _encode(kind, g, X, cfg):
    weights = SNNWeights.init(X.shape[1], layers=cfg.snn_layers, seed=cfg.seed)
    if kind == "SNN":
        return snn_forward(clique_lift(g), X, weights)
    return gcn_forward(g, X, weights)


def build_representations(g: TextAttributedGraph, cfg: ExperimentConfig,
                          workers: int = 1) -> Representations:
    tf, model = _factorize(g, cfg)
    reps = Representations(g, tf, model)
    mf = embed(model, tf.T)
    wanted = set(cfg.families)
    if "MF" in wanted:
        reps.families["MF"] = mf
    if wanted & {"MF+TOPO", "SNN", "GCN"}:
        topo = _augment(mf, g, cfg, workers)
        if "MF+TOPO" in wanted:
            reps.families["MF+TOPO"] = topo
        for kind in ("SNN", "GCN"):
            if kind in wanted:
                reps.families[kind] = _encode(kind, g, topo, cfg)
    return reps


def membership_splits(n: int, seed: int):
    """Disjoint target-member / target-non-member / shadow node sets (1/4, 1/4, 1/2)."""
    perm = np.random.default_rng(seed).permutation(n)
    q = n // 4
    return np.sort(perm[:q]), np.sort(perm[q:2 * q]), np.sort(perm[2 * q:])


@_stage("attacks")
def run_attack(attack: str, R: np.ndarray, g: TextAttributedGraph, cfg: ExperimentConfig,
               X=None, labels=None) -> dict:
    """One attack on one representation matrix; returns an AttackReport dict (without family)."""
    row = {"attack": attack, "n": g.n, "seed": cfg.seed}
    if attack in ("distance", "decoder"):
        pairs, truth = candidate_pairs(g, seed=cfg.seed, max_full=cfg.max_full_pairs)
        if truth.all() or not truth.any():
            raise ValueError("edge attacks need both linked and unlinked candidate pairs")
        if attack == "distance":
            scores = distance_edge_attack(R, pairs).scores
        else:
            scale = np.abs(R).max()
            target = R / scale if scale > 0 else R
            state = decoder_gra(target, X, steps=cfg.decoder_steps, lr=cfg.decoder_lr,
                                seed=cfg.seed, known_features=cfg.known_features,
                                init=cfg.decoder_init)
            scores = state.edge_scores[pairs[:, 0], pairs[:, 1]]
            row["loss_trace"] = [float(x) for x in state.loss_trace]
        k = int(truth.sum())
    elif attack == "membership":
        if labels is None:
            raise ValueError("membership inference needs node labels")
        members, nonmembers, shadow = membership_splits(g.n, cfg.seed)
        C = int(np.max(labels)) + 1
        if np.unique(labels[members]).size < 2:
            target = SoftmaxClassifier.uniform(R.shape[1], C)
        else:
            target = train_softmax(R, labels, members, epochs=cfg.mi_epochs, lr=cfg.mi_lr,
                                   seed=cfg.seed, n_classes=C)
        rep = membership_inference(target, R, labels, members, nonmembers, shadow,
                                   seed=cfg.seed, epochs=cfg.mi_epochs, lr=cfg.mi_lr)
        scores, truth = rep.scores, rep.is_member
        k = int(truth.sum())
    else:
        raise ValueError(f"unknown attack {attack!r}")
    row["auc"] = auc(scores, truth)
    row["precision_at_k"] = precision_at_k(scores, truth, k)
    return row


def environment_stamp(seed: int) -> dict:
    return {
        "seed": seed,
        "topoleak": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }


@dataclass
class ComparisonReport:
    rows: list[dict]
    environment: dict

    def to_json(self) -> str:
        return json.dumps({"environment": self.environment, "rows": self.rows},
                          indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["representation_family", "attack", "auc", "precision_at_k"])
        for r in self.rows:
            w.writerow([r["representation_family"], r["attack"],
                        repr(r["auc"]), repr(r["precision_at_k"])])
        return buf.getvalue()

    def write(self, out_dir, stem: str = "report") -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{stem}.json").write_text(self.to_json(), encoding="utf-8")
        (out / f"{stem}.csv").write_text(self.to_csv(), encoding="utf-8")


def run_pipeline(cfg: ExperimentConfig, out_dir=None, workers: int = 1) -> ComparisonReport:
    """Every (family, attack) cell of the configured grid, in grid order."""
    g, labels = load_graph(cfg)
    reps = build_representations(g, cfg, workers=workers)
    X = reps.text.T.T
    cells = [(fam, att) for fam in cfg.families for att in cfg.attacks]

    def cell(fa):
        fam, att = fa
        row = run_attack(att, reps.families[fam], g, cfg, X=X, labels=labels)
        row["representation_family"] = fam
        return row

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(cell, cells))
    else:
        rows = [cell(c) for c in cells]
    report = ComparisonReport(rows, environment_stamp(cfg.seed))
    if out_dir is not None:
        report.write(out_dir)
    return report


def _mean_std(values):
    a = np.asarray(values, dtype=float)
    sd = float(a.std(ddof=1)) if a.size > 1 else 0.0
    return float(a.mean()), sd


def run_bench(cfg: ExperimentConfig, seeds, out_dir=None, workers: int = 1) -> dict:
    """Repeat :func:`run_pipeline` over ``seeds``; mean and sample std per cell."""
    seeds = list(seeds)
    per_seed = [run_pipeline(cfg.with_seed(s), workers=workers) for s in seeds]
    table = []
    for fam in cfg.families:
        for att in cfg.attacks:
            cells = [r for rep in per_seed for r in rep.rows
                     if r["representation_family"] == fam and r["attack"] == att]
            auc_m, auc_s = _mean_std([c["auc"] for c in cells])
            p_m, p_s = _mean_std([c["precision_at_k"] for c in cells])
            table.append({
                "representation_family": fam, "attack": att,
                "auc_mean": auc_m, "auc_std": auc_s,
                "precision_at_k_mean": p_m, "precision_at_k_std": p_s,
                "auc_per_seed": [c["auc"] for c in cells],
                "n_seeds": len(cells),
            })
    result = {"environment": environment_stamp(seeds[0] if seeds else cfg.seed),
              "seeds": seeds, "table": table}
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench.json").write_text(json.dumps(result, indent=2, sort_keys=True) + "\n",
                                        encoding="utf-8")
        (out / "bench.csv").write_text(bench_csv(table), encoding="utf-8")
    return result


def bench_csv(table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["representation_family", "attack", "auc_mean", "auc_std",
                "precision_at_k_mean", "precision_at_k_std", "n_seeds"])
    for r in table:
        w.writerow([r["representation_family"], r["attack"],
                    f"{r['auc_mean']:.6f}", f"{r['auc_std']:.6f}",
                    f"{r['precision_at_k_mean']:.6f}", f"{r['precision_at_k_std']:.6f}",
                    r["n_seeds"]])
    return buf.getvalue()


def format_table(table) -> str:
    """Plain-text rendering of a bench table for terminals."""
    head = f"{'family':<9} {'attack':<11} {'AUC':>17} {'precision@k':>17}"
    lines = [head, "-" * len(head)]
    for r in table:
        lines.append(
            f"{r['representation_family']:<9} {r['attack']:<11} "
            f"{r['auc_mean']:>8.3f} ± {r['auc_std']:<6.3f} "
            f"{r['precision_at_k_mean']:>8.3f} ± {r['precision_at_k_std']:<6.3f}"
        )
    return "\n".join(lines)

