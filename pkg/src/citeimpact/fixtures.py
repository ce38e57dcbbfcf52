"""Bundled toy networks reproducing the two motivating examples.

``fig1``: A and B each have five citers; A's citers all cite each other
(complete orientation, 10 edges), B's do not. ``fig2``: A and B each have
three references; A's five citers also cite all of them, B's cite none.
``fig12`` holds both with ids suffixed ``_fig1``/``_fig2`` and has a
metadata file assigning groups ``fig1``/``fig2``.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from citeimpact.graph import CitationGraph, ValidationReport, load_graph

NAMES = ("fig1", "fig2", "fig12")


def path(name: str) -> Path:
    if name not in NAMES and name != "fig12_meta":
        raise KeyError(f"no fixture named {name!r}")
    return Path(str(resources.files("citeimpact") / "data" / f"{name}.tsv"))


def load(name: str, with_meta: bool = False) -> tuple[CitationGraph, ValidationReport]:
    meta = path("fig12_meta") if with_meta else None
    if with_meta and name != "fig12":
        raise ValueError("metadata ships only for fig12")
    return load_graph(path(name), meta)
