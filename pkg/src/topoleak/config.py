"""Experiment configuration and its INI-style file format.

Sections are named after the package modules::

    [graph-core]
    edges = data/edges.tsv
    docs = data/docs.tsv

    [factorization]
    k = 40
    lambda = 0.2

Any section or key not listed in ``_SCHEMA`` is rejected.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .factorization import FactorizationConfig
from .synthetic import PlantedSpec

FAMILIES = ("MF", "MF+TOPO", "SNN", "GCN")
ATTACKS = ("distance", "decoder", "membership")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    edges: str | None = None
    docs: str | None = None
    labels: str | None = None
    planted: PlantedSpec = field(default_factory=PlantedSpec)
    t: int = 80
    factorization: FactorizationConfig = field(default_factory=FactorizationConfig)
    radius: int = 2
    snn_layers: int = 2
    families: tuple[str, ...] = ("MF", "MF+TOPO", "SNN")
    attacks: tuple[str, ...] = ("distance", "decoder")
    decoder_steps: int = 300
    decoder_lr: float = 0.5
    known_features: bool = True
    decoder_init: str = "similarity"
    max_full_pairs: int = 300
    mi_epochs: int = 500
    mi_lr: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not self.families:
            raise ConfigError("select at least one representation family")
        if not self.attacks:
            raise ConfigError("select at least one attack")
        bad = set(self.families) - set(FAMILIES)
        if bad:
            raise ConfigError(f"unknown families {sorted(bad)}; choose from {FAMILIES}")
        bad = set(self.attacks) - set(ATTACKS)
        if bad:
            raise ConfigError(f"unknown attacks {sorted(bad)}; choose from {ATTACKS}")
        if self.decoder_init not in ("similarity", "random"):
            raise ConfigError("decoder_init must be 'similarity' or 'random'")
        if self.t < 1 or self.radius < 0 or self.snn_layers < 0:
            raise ConfigError("t must be >= 1, radius and snn layers >= 0")

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, seed=seed, factorization=replace(self.factorization, seed=seed))


def _list(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def _bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


# section -> key -> (target, parser); target "planted.x" / "factorization.x" nest
_SCHEMA = {
    "graph-core": {"edges": ("edges", str), "docs": ("docs", str), "labels": ("labels", str)},
    "text-features": {"t": ("t", int)},
    "factorization": {
        "k": ("factorization.k", int),
        "lambda": ("factorization.lam", float),
        "max_iters": ("factorization.max_iters", int),
        "tol": ("factorization.tol", float),
    },
    "persistence": {"radius": ("radius", int)},
    "simplicial": {"layers": ("snn_layers", int)},
    "attacks": {
        "decoder_steps": ("decoder_steps", int),
        "decoder_lr": ("decoder_lr", float),
        "known_features": ("known_features", _bool),
        "decoder_init": ("decoder_init", str),
        "max_full_pairs": ("max_full_pairs", int),
        "mi_epochs": ("mi_epochs", int),
        "mi_lr": ("mi_lr", float),
    },
    "eval-cli": {
        "seed": ("seed", int),
        "families": ("families", _list),
        "attacks": ("attacks", _list),
        "n": ("planted.n", int),
        "communities": ("planted.communities", int),
        "p_in": ("planted.p_in", float),
        "p_out": ("planted.p_out", float),
        "vocab_per_community": ("planted.vocab_per_community", int),
        "noise_vocab": ("planted.noise_vocab", int),
        "words_per_doc": ("planted.words_per_doc", int),
        "noise_rate": ("planted.noise_rate", float),
    },
}


def parse_config(text: str, base_dir=None) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    top, planted, fact = {}, {}, {}
    for section in cp.sections():
        keys = _SCHEMA.get(section)
        if keys is None:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            if key not in keys:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            target, parse = keys[key]
            try:
                value = parse(raw)
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from None
            if target in ("edges", "docs", "labels") and base_dir is not None:
                value = str(Path(base_dir) / value)
            if target.startswith("planted."):
                planted[target[8:]] = value
            elif target.startswith("factorization."):
                fact[target[14:]] = value
            else:
                top[target] = value
    try:
        seed = top.get("seed", 0)
        return ExperimentConfig(
            planted=PlantedSpec(**planted),
            factorization=FactorizationConfig(seed=seed, **fact),
            **top,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, base_dir=path.parent)
