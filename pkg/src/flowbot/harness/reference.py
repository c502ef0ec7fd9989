"""The shipped speech-only pipeline and the scenario runner.

Wiring: audio source -> I/O manager -> aggregator (1 s window / 250 ms hop)
-> splitter; one branch feeds the attention node whose bit stream controls
the latch; the gated branch feeds the scripted interpreter, then the skill
manager, whose outputs land in the simulated speaker and UART sinks.
"""

from __future__ import annotations

import json

from ..flowcore.clock import VirtualClock
from ..flowcore.graphdef import GraphDef, LatchDef, NodeDef, StreamDef
from ..flowcore.latch import LatchState
from ..flowcore.runtime import GraphRunner, RunReport, StopCondition
from ..flowcore.stream import LosslessPolicy
from ..flowcore.watchdog import WatchdogConfig
from ..skills.builtin import register_demo_skills
from ..skills.registry import SkillRegistry
from .nodes import harness_kind_registry
from .scenario import ScenarioScript, scenario_audio

DEFAULT_WINDOW_SAMPLES = 16000
DEFAULT_HOP_SAMPLES = 4000
DEFAULT_CHUNK_SAMPLES = 1600
DEFAULT_SAMPLE_RATE_HZ = 16000


def reference_pipeline(detector: dict | None = None, manager_params: dict | None = None) -> GraphDef:
    """Build the reference speech pipeline; detector defaults to scripted."""
    detector = detector or {"kind": "scripted"}
    manager_params = manager_params or {}
    lossless = LosslessPolicy(deadline_us=2_000_000)
    return GraphDef(
        nodes=(
            NodeDef("mic", "audio_source", {
                "device_id": "mic0",
                "chunk_samples": DEFAULT_CHUNK_SAMPLES,
                "pad_to_samples": DEFAULT_WINDOW_SAMPLES,
            }),
            NodeDef("iomgr", "io_manager", {"routing": {"mic0": ["ui_audio"]}}),
            NodeDef("agg", "aggregator", {
                "window_samples": DEFAULT_WINDOW_SAMPLES,
                "hop_samples": DEFAULT_HOP_SAMPLES,
                "sample_rate_hz": DEFAULT_SAMPLE_RATE_HZ,
            }),
            NodeDef("split", "splitter", {"outputs": ["win_att", "win_gate"]}),
            NodeDef("att", "attention", {"detector": detector}),
            NodeDef("interp", "interpreter_stub", {}),
            NodeDef("mgr", "skill_manager", manager_params),
            NodeDef("speaker", "speaker_sink", {}),
            NodeDef("uart", "uart_sink", {}),
        ),
        streams=(
            StreamDef("s_mic", "mic", "out", "iomgr", "in", lossless),
            StreamDef("s_ui_audio", "iomgr", "ui_audio", "agg", "in", lossless),
            StreamDef(
                "s_windows", "agg", "windows", "split", "in", lossless,
                watchdog=WatchdogConfig(max_latency_us=1_000_000),
            ),
            StreamDef("s_win_att", "split", "win_att", "att", "in", lossless),
            StreamDef("s_win_gated", "split", "win_gate", "interp", "in", lossless),
            StreamDef("s_ctl", "att", "bit", None, None, lossless),
            StreamDef("s_interp", "interp", "out", "mgr", "in", lossless),
            StreamDef("s_speech", "mgr", "speech", "speaker", "in", lossless),
            StreamDef("s_loco", "mgr", "locomotion", "uart", "in", lossless),
        ),
        latches=(
            LatchDef(stream_id="s_win_gated", control_stream_id="s_ctl",
                     initial_state=LatchState.CLOSED),
        ),
    )


def _led_states(report: RunReport) -> list[dict]:
    """Consciousness-state stream: awaiting / receiving / executing."""
    changes: list[tuple[int, int, str]] = [(0, -1, "awaiting")]
    for i, event in enumerate(report.events):
        if event["kind"] == "latch":
            changes.append((event["t_us"], i, "receiving" if event["state"] == "open" else "awaiting"))
    for i, inv in enumerate(report.skill_invocations):
        changes.append((inv["t_us"], 10_000_000 + 2 * i, "executing"))
        changes.append((inv["t_us"], 10_000_000 + 2 * i + 1, "awaiting"))
    changes.sort(key=lambda c: (c[0], c[1]))
    out: list[dict] = []
    for t_us, _, state in changes:
        if not out or out[-1]["state"] != state:
            out.append({"t_us": t_us, "state": state})
    return out


def run_scenario(
    graph: GraphDef,
    scenario: ScenarioScript,
    kinds=None,
    registry: SkillRegistry | None = None,
    seed: int | None = None,
) -> dict:
    """Execute a scenario under a virtual clock; the result dict is
    deterministic (byte-identical JSON) for identical inputs and seed."""
    audio = scenario_audio(scenario)
    run_seed = scenario.seed if seed is None else seed
    if registry is None:
        registry = SkillRegistry()
        register_demo_skills(registry)
    env = {
        "audio": audio,
        "annotations": list(scenario.annotations),
        "interpreter_script": list(scenario.interpreter_script),
        "skill_registry": registry,
    }
    if scenario.time_limit_s is not None:
        time_limit_us = int(scenario.time_limit_s * 1e6)
    else:
        time_limit_us = int((audio.duration_s + 1.0) * 1e6)
    runner = GraphRunner(
        graph,
        kinds=kinds if kinds is not None else harness_kind_registry(),
        clock=VirtualClock(),
        stop=StopCondition(time_limit_us=time_limit_us),
        seed=run_seed,
        env=env,
    )
    report = runner.run()
    doc = report.to_json()
    doc["led_states"] = _led_states(report)
    doc["conservation_ok"] = report.conservation_ok()
    return doc


def report_to_json_str(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
