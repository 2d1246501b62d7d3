"""Topology-enriched text-attributed node embeddings and privacy attacks against them."""

__version__ = "0.1.0"
