"""Simulated devices, the reference speech pipeline, scenarios and the CLI."""

from .config import load_graph_config, load_scan_scene, packaged_graph
from .nodes import (
    DeviceSample,
    harness_kind_registry,
    io_manager_route,
    scripted_keyword_detector,
)
from .reference import reference_pipeline, report_to_json_str, run_scenario
from .scenario import (
    Annotation,
    ScenarioError,
    ScenarioScript,
    load_scenario,
    scenario_audio,
    synthesize_audio,
)

__all__ = [
    "Annotation",
    "DeviceSample",
    "ScenarioError",
    "ScenarioScript",
    "harness_kind_registry",
    "io_manager_route",
    "load_graph_config",
    "load_scan_scene",
    "load_scenario",
    "packaged_graph",
    "reference_pipeline",
    "report_to_json_str",
    "run_scenario",
    "scenario_audio",
    "scripted_keyword_detector",
    "synthesize_audio",
]
