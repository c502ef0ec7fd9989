"""Scenario scripts: audio, keyword annotations, scripted interpretations.

A scenario document:

    {
      "audio": {"wav": "path.wav"}
             | {"synthetic": {"kind": "silence"|"tone"|"bursts"|"noise", ...}},
      "annotations": [{"start_s": 2.0, "end_s": 2.5, "label": "keyword"}],
      "interpreter_script": [{"trigger_window_index": 5,
                              "skill_id": "get_time",
                              "entities": {}, "confidence": 1.0}],
      "ultrasonic_scene": [{"theta_deg": 0, "distance_m": 1.0 | null}],
      "time_limit_s": 5.0,
      "seed": 0
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..dsp.audio import AudioBuffer, read_wav


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Annotation:
    start_s: float
    end_s: float
    label: str = "keyword"

    def __post_init__(self):
        if not (0 <= self.start_s < self.end_s):
            raise ScenarioError(f"bad annotation interval [{self.start_s}, {self.end_s}]")


@dataclass(frozen=True)
class ScenarioScript:
    audio: dict
    annotations: tuple[Annotation, ...] = ()
    interpreter_script: tuple[dict, ...] = ()
    ultrasonic_scene: tuple[tuple[float, Optional[float]], ...] = ()
    time_limit_s: Optional[float] = None
    seed: int = 0


def load_scenario(source) -> ScenarioScript:
    """Build a scenario from a dict, a JSON string or a file path."""
    if isinstance(source, dict):
        doc = source
    elif isinstance(source, str) and source.lstrip().startswith("{"):
        doc = json.loads(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if "audio" not in doc:
        raise ScenarioError("scenario needs an 'audio' entry")
    annotations = tuple(
        Annotation(
            start_s=float(a["start_s"]), end_s=float(a["end_s"]), label=str(a.get("label", "keyword"))
        )
        for a in doc.get("annotations", [])
    )
    script = []
    for entry in doc.get("interpreter_script", []):
        if "trigger_window_index" not in entry:
            raise ScenarioError("interpreter_script entries need trigger_window_index")
        flat = {"trigger_window_index": int(entry["trigger_window_index"])}
        # both flat entries and nested {"interpretation": {...}} are accepted
        flat.update(entry.get("interpretation", {k: v for k, v in entry.items()
                                                 if k != "trigger_window_index"}))
        script.append(flat)
    scene = []
    for p in doc.get("ultrasonic_scene", []):
        scene.append((float(p["theta_deg"]), None if p.get("distance_m") is None else float(p["distance_m"])))
    return ScenarioScript(
        audio=dict(doc["audio"]),
        annotations=annotations,
        interpreter_script=tuple(script),
        ultrasonic_scene=tuple(scene),
        time_limit_s=None if doc.get("time_limit_s") is None else float(doc["time_limit_s"]),
        seed=int(doc.get("seed", 0)),
    )


def synthesize_audio(spec: dict, seed: int = 0) -> AudioBuffer:
    """Deterministic test signals: silence, tone, tone bursts over silence,
    or seeded Gaussian noise."""
    kind = spec.get("kind", "silence")
    rate = int(spec.get("sample_rate_hz", 16000))
    duration_s = float(spec.get("duration_s", 1.0))
    n = int(round(duration_s * rate))
    t = np.arange(n) / rate
    if kind == "silence":
        samples = np.zeros(n)
    elif kind == "tone":
        amp = float(spec.get("amp", 0.5))
        freq = float(spec.get("freq_hz", 440.0))
        samples = amp * np.sin(2 * np.pi * freq * t)
    elif kind == "bursts":
        samples = np.zeros(n)
        for burst in spec.get("bursts", []):
            lo = int(round(float(burst["start_s"]) * rate))
            hi = min(n, int(round(float(burst["end_s"]) * rate)))
            amp = float(burst.get("amp", 0.5))
            freq = float(burst.get("freq_hz", 440.0))
            samples[lo:hi] = amp * np.sin(2 * np.pi * freq * t[lo:hi])
    elif kind == "noise":
        amp = float(spec.get("amp", 0.1))
        rng = np.random.default_rng(seed)
        samples = amp * rng.standard_normal(n)
        samples = np.clip(samples, -1.0, 1.0)
    else:
        raise ScenarioError(f"unknown synthetic audio kind {kind!r}")
    return AudioBuffer(samples=samples, sample_rate_hz=rate)


def scenario_audio(scenario: ScenarioScript) -> AudioBuffer:
    if "wav" in scenario.audio:
        audio = read_wav(scenario.audio["wav"])
    elif "synthetic" in scenario.audio:
        audio = synthesize_audio(scenario.audio["synthetic"], seed=scenario.seed)
    else:
        raise ScenarioError("scenario audio needs 'wav' or 'synthetic'")
    for ann in scenario.annotations:
        if ann.end_s > audio.duration_s + 1e-9:
            raise ScenarioError(
                f"annotation [{ann.start_s}, {ann.end_s}] beyond audio of {audio.duration_s:.3f}s"
            )
    return audio
