"""File-level loading of graph and scene documents."""

from __future__ import annotations

import json
from importlib import resources

from ..flowcore.graphdef import GraphDef, SchemaError, graph_from_json


def load_graph_config(source) -> GraphDef:
    """Load a GraphDef from a dict, a JSON string or a file path.

    Schema violations raise :class:`SchemaError` naming the offending key.
    """
    if isinstance(source, dict):
        return graph_from_json(source)
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return graph_from_json(json.loads(source))
    with open(source, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"not valid JSON: {exc}") from exc
    return graph_from_json(doc)


def load_scan_scene(source) -> dict:
    """Load an ultrasonic scene: {"ultrasonic_scene": [...], "climb_height_m": ...}."""
    if isinstance(source, dict):
        doc = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if "ultrasonic_scene" not in doc:
        raise SchemaError("ultrasonic_scene", "missing required key")
    return doc


def packaged_config_text(name: str) -> str:
    return resources.files("flowbot.configs").joinpath(name).read_text(encoding="utf-8")


def packaged_graph(name: str = "reference_pipeline.json") -> GraphDef:
    return graph_from_json(json.loads(packaged_config_text(name)))
