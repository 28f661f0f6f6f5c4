"""Bundled problem setups (graph, labeling, coins) shipped as JSON."""

from __future__ import annotations

import json
from importlib import resources

from .coins import CoinSpec
from .graph import load_graph

NAMES = ("example1", "example2", "fig3", "triangle")


def preset_document(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(NAMES)}")
    text = resources.files(__package__).joinpath("presets", f"{name}.json").read_text()
    return json.loads(text)


def load_preset(name: str):
    """Return ``(graph, labeling, coin_spec)`` for a bundled preset."""
    doc = preset_document(name)
    graph, labeling = load_graph(doc["graph"])
    return graph, labeling, CoinSpec.from_json(doc["coins"])
