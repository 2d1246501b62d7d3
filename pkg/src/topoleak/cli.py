"""Command-line interface.

Every subcommand reads the graph from the config (``[graph-core]`` paths, or
the planted-partition generator in ``[eval-cli]`` when no edge file is set)
and writes its artifacts under ``--out``. Exit codes: 0 success, 1 config
error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import ATTACKS, FAMILIES, ConfigError, ExperimentConfig, load_config
from .factorization import save_model
from .graph import GraphFormatError, save_edge_list
from .persistence import node_diagram, topo_features
from .pipeline import (
    PipelineError,
    build_representations,
    format_table,
    load_graph,
    run_attack,
    run_bench,
    run_pipeline,
)
from .simplicial import betti_numbers, clique_lift

log = logging.getLogger("topoleak")


def _write_matrix(path: Path, A) -> None:
    np.savetxt(path, np.asarray(A, dtype=float), delimiter=",", fmt="%.17g")


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _family_filename(family: str) -> str:
    return "embeddings_" + family.replace("+", "_") + ".csv"


def cmd_ingest(cfg, args, out: Path) -> None:
    g, labels = load_graph(cfg)
    save_edge_list(g, out / "edges.tsv", out / "docs.tsv")
    if labels is not None:
        (out / "labels.tsv").write_text(
            "".join(f"{i}\t{int(c)}\n" for i, c in enumerate(labels)), encoding="utf-8")
    deg = g.degrees()
    _write_json(out / "graph.json", {
        "n": g.n, "edges": len(g.edges), "isolated": int(np.sum(deg == 0)),
        "max_degree": int(deg.max()) if g.n else 0, "seed": cfg.seed,
    })


def cmd_embed(cfg, args, out: Path) -> None:
    g, _ = load_graph(cfg)
    reps = build_representations(g, replace(cfg, families=("MF",)), workers=args.workers)
    reps.text.to_csv(out / "text_features.csv")
    save_model(reps.model, out / "model.rt4sc")
    _write_matrix(out / _family_filename("MF"), reps.families["MF"])


def cmd_persist(cfg, args, out: Path) -> None:
    g, _ = load_graph(cfg)
    if args.node is not None:
        node_diagram(g, args.node, cfg.radius).write_csv(out / f"diagram_{args.node}.csv")
        return
    _write_matrix(out / "topo_features.csv", topo_features(g, cfg.radius, workers=args.workers))
    lines = ["node,dim,birth,death"]
    for v in range(g.n):
        for d, b, e in node_diagram(g, v, cfg.radius).bars:
            lines.append(f"{v},{d},{b!r},{'inf' if e == float('inf') else repr(e)}")
    (out / "diagrams.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_lift(cfg, args, out: Path) -> None:
    g, _ = load_graph(cfg)
    cx = clique_lift(g)
    cx.write(out / "complex.txt")
    b0, b1 = betti_numbers(cx)
    _write_json(out / "complex.json", {
        "vertices": cx.n, "edges": len(cx.edges), "triangles": len(cx.triangles),
        "betti0": int(b0), "betti1": int(b1),
    })


def cmd_attack(cfg, args, out: Path) -> None:
    g, labels = load_graph(cfg)
    reports = []
    if args.embeddings:
        R = np.loadtxt(args.embeddings, delimiter=",", ndmin=2)
        sources = {args.family or Path(args.embeddings).stem: R}
        X = None
        if cfg.known_features and "decoder" in cfg.attacks:
            X = build_representations(g, replace(cfg, families=("MF",))).text.T.T
    else:
        fams = (args.family,) if args.family else cfg.families
        reps = build_representations(g, replace(cfg, families=fams), workers=args.workers)
        sources = reps.families
        X = reps.text.T.T
    for fam, R in sources.items():
        for att in cfg.attacks:
            row = run_attack(att, R, g, cfg, X=X, labels=labels)
            row["representation_family"] = fam
            reports.append(row)
    _write_json(out / "attacks.json", reports)


def cmd_report(cfg, args, out: Path) -> None:
    run_pipeline(cfg, out_dir=out, workers=args.workers)


def cmd_bench(cfg, args, out: Path) -> None:
    seeds = range(cfg.seed, cfg.seed + args.seeds)
    result = run_bench(cfg, seeds, out_dir=out, workers=args.workers)
    print(format_table(result["table"]))


COMMANDS = {
    "ingest": (cmd_ingest, "load or generate a graph and write it as edge/doc files"),
    "embed": (cmd_embed, "fit the text-aware factorization and write MF embeddings"),
    "persist": (cmd_persist, "ego-network persistence diagrams and topological features"),
    "lift": (cmd_lift, "clique complex export and Betti numbers"),
    "attack": (cmd_attack, "run the configured attacks on representation families"),
    "report": (cmd_report, "full family x attack comparison for one seed"),
    "bench": (cmd_bench, "comparison table with mean/std over several seeds"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI-style experiment config")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--workers", type=int, default=1, help="threads for parallel stages")
    common.add_argument("--edges", help="edge list (overrides [graph-core] edges)")
    common.add_argument("--docs", help="node documents (overrides [graph-core] docs)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="topoleak", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "persist":
            p.add_argument("--node", type=int, help="write a single node's diagram")
        if name == "attack":
            p.add_argument("--family", choices=FAMILIES, help="restrict to one family")
            p.add_argument("--embeddings", help="attack a released CSV matrix instead")
            p.add_argument("--attacks", help=f"comma list from {ATTACKS}")
        if name == "bench":
            p.add_argument("--seeds", type=int, default=10, help="number of seeds")
    return parser


def _resolve_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    if args.edges:
        cfg = replace(cfg, edges=args.edges, docs=args.docs or cfg.docs)
    if getattr(args, "attacks", None):
        cfg = replace(cfg, attacks=tuple(a.strip() for a in args.attacks.split(",")))
    if args.workers < 1:
        raise ConfigError("--workers must be >= 1")
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    handler = COMMANDS[args.command][0]
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        handler(cfg, args, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (PipelineError, GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
