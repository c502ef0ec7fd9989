"""Config loading, device routing, scripted detection, scenario runs, CLI."""

import json

import numpy as np
import pytest

from flowbot.flowcore import SampleChunk, SchemaError, validate_graph
from flowbot.harness import (
    Annotation,
    DeviceSample,
    ScenarioError,
    io_manager_route,
    load_graph_config,
    load_scenario,
    packaged_graph,
    reference_pipeline,
    report_to_json_str,
    run_scenario,
    scenario_audio,
    scripted_keyword_detector,
    synthesize_audio,
)
from flowbot.harness.cli import main as cli_main
from flowbot.harness.nodes import harness_kind_registry
from flowbot.dsp import AudioBuffer


def stub_env():
    return {"audio": AudioBuffer(samples=np.zeros(16000), sample_rate_hz=16000)}


def demo_scenario(script=None, annotations=None, duration_s=4.0, **extra):
    doc = {
        "audio": {"synthetic": {"kind": "silence", "duration_s": duration_s}},
        "annotations": annotations
        if annotations is not None
        else [{"start_s": 2.0, "end_s": 2.5, "label": "keyword"}],
        "interpreter_script": script
        if script is not None
        else [{"trigger_window_index": 5, "skill_id": "get_time", "entities": {}, "confidence": 0.9}],
        "seed": 0,
    }
    doc.update(extra)
    return load_scenario(doc)


# -- graph config loading -------------------------------------------------------


def test_shipped_reference_config_is_valid():
    graph = packaged_graph()
    assert validate_graph(graph, harness_kind_registry(), env=stub_env()) == []
    assert graph == reference_pipeline()


def test_missing_streams_key_is_schema_error():
    with pytest.raises(SchemaError) as exc:
        load_graph_config({"nodes": [], "latches": []})
    assert exc.value.path == "streams"


def test_lossy_stream_without_capacity_points_at_the_entry():
    doc = {
        "nodes": [{"id": "a", "kind": "sink", "params": {}}],
        "streams": [
            {
                "id": "s",
                "from_node": "a",
                "from_port": "out",
                "to_node": "a",
                "to_port": "in",
                "policy": {"kind": "lossy"},
            }
        ],
        "latches": [],
    }
    with pytest.raises(SchemaError) as exc:
        load_graph_config(doc)
    assert exc.value.path == "streams[0].policy"
    assert "capacity" in exc.value.reason


def test_graph_def_json_round_trip():
    graph = reference_pipeline()
    assert load_graph_config(graph.to_json()) == graph


# -- io manager -------------------------------------------------------------------


def chunk(n=4):
    return SampleChunk(samples=np.zeros(n), sample_rate_hz=16000, start_sample=0)


def test_route_single_interface():
    sample = DeviceSample("mic0", chunk())
    assert io_manager_route(sample, {"mic0": ["ui_audio"]}) == [("ui_audio", sample.chunk)]


def test_route_fans_out_identical_payload():
    sample = DeviceSample("mic0", chunk())
    routed = io_manager_route(sample, {"mic0": ["ui_audio", "ui_recorder"]})
    assert [r[0] for r in routed] == ["ui_audio", "ui_recorder"]
    assert routed[0][1] is routed[1][1]


def test_unknown_device_dead_letters():
    assert io_manager_route(DeviceSample("cam0", chunk()), {"mic0": ["ui_audio"]}) == []


# -- scripted detector ---------------------------------------------------------------


def test_detector_fires_on_overlap():
    assert scripted_keyword_detector((1.75, 2.75), [Annotation(2.0, 2.5)]) == 1


def test_detector_quiet_without_annotations():
    assert scripted_keyword_detector((0.0, 1.0), [Annotation(2.0, 2.5)]) == 0


def test_window_end_boundary_is_half_open():
    assert scripted_keyword_detector((2.0, 3.0), [Annotation(3.0, 3.2)]) == 0
    assert scripted_keyword_detector((2.0, 3.0), [Annotation(2.999, 3.2)]) == 1


# -- scenario audio --------------------------------------------------------------------


def test_synthetic_kinds():
    assert np.all(synthesize_audio({"kind": "silence", "duration_s": 0.5}).samples == 0)
    tone = synthesize_audio({"kind": "tone", "freq_hz": 100.0, "amp": 0.3, "duration_s": 0.5})
    assert np.max(np.abs(tone.samples)) <= 0.3 + 1e-12
    noise1 = synthesize_audio({"kind": "noise", "duration_s": 0.1}, seed=5)
    noise2 = synthesize_audio({"kind": "noise", "duration_s": 0.1}, seed=5)
    np.testing.assert_array_equal(noise1.samples, noise2.samples)
    with pytest.raises(ScenarioError):
        synthesize_audio({"kind": "theremin"})


def test_annotation_beyond_audio_rejected():
    scenario = demo_scenario(annotations=[{"start_s": 3.9, "end_s": 4.5}])
    with pytest.raises(ScenarioError):
        scenario_audio(scenario)


# -- end-to-end scenarios ---------------------------------------------------------------


def test_reference_scenario_opens_gate_once_and_runs_get_time():
    scenario = demo_scenario()
    report = run_scenario(reference_pipeline(), scenario)
    latch = report["latches"]["s_win_gated"]
    assert latch["openings"] == 1
    assert latch["forwarded"] == 5 and latch["suppressed"] == 8
    invocations = report["skill_invocations"]
    assert [i["skill_id"] for i in invocations] == ["get_time"]
    assert report["extras"]["speech"][0]["text"].startswith("the time is")
    assert report["conservation_ok"]
    # every invocation traces back to a scripted interpretation
    scripted_ids = {e["skill_id"] for e in scenario.interpreter_script}
    assert {i["skill_id"] for i in invocations} <= scripted_ids


def test_no_keyword_means_interpreter_sees_nothing():
    report = run_scenario(reference_pipeline(), demo_scenario(annotations=[]))
    latch = report["latches"]["s_win_gated"]
    assert latch["openings"] == 0
    assert latch["forwarded"] == 0 and latch["suppressed"] == 13
    assert report["skill_invocations"] == []
    assert report["streams"]["s_interp"]["pushed"] == 0


def test_gated_windows_conserved():
    report = run_scenario(reference_pipeline(), demo_scenario())
    latch = report["latches"]["s_win_gated"]
    windows = report["streams"]["s_windows"]["pushed"]
    assert windows == latch["forwarded"] + latch["suppressed"]


def test_reports_are_byte_identical_across_runs():
    a = run_scenario(reference_pipeline(), demo_scenario())
    b = run_scenario(reference_pipeline(), demo_scenario())
    assert report_to_json_str(a) == report_to_json_str(b)


def test_seed_override_changes_report_seed_field():
    report = run_scenario(reference_pipeline(), demo_scenario(), seed=99)
    assert report["seed"] == 99


def test_drive_skill_reaches_uart():
    scenario = demo_scenario(
        script=[{
            "trigger_window_index": 5,
            "interpretation": {
                "skill_id": "drive",
                "entities": {"direction": "right_forward", "speed": 128},
                "confidence": 1.0,
            },
        }]
    )
    report = run_scenario(reference_pipeline(), scenario)
    assert report["uart_hex"] == "8002"


def test_prompt_and_followup_fill_a_slot():
    scenario = demo_scenario(
        script=[
            {"trigger_window_index": 5, "skill_id": "find_object", "entities": {}, "confidence": 0.9},
            {"trigger_window_index": 7, "skill_id": "", "entities": {"object_label": "keys"}},
        ]
    )
    report = run_scenario(reference_pipeline(), scenario)
    speech = [s["text"] for s in report["extras"]["speech"]]
    assert any("object label" in t for t in speech)  # the prompt
    assert [i["skill_id"] for i in report["skill_invocations"]] == ["find_object"]
    assert report["skill_invocations"][0]["entities"] == {"object_label": "keys"}


def test_prompt_timeouts_abort_session_with_notice():
    graph = reference_pipeline(
        manager_params={"followup_timeout_s": 0.4, "reprompt_limit": 1}
    )
    scenario = demo_scenario(
        script=[{"trigger_window_index": 5, "skill_id": "find_object", "entities": {}, "confidence": 0.9}],
        time_limit_s=6.0,
    )
    report = run_scenario(graph, scenario)
    assert report["skill_invocations"] == []
    speech = [s["text"] for s in report["extras"]["speech"]]
    assert sum("object label" in t for t in speech) == 2  # prompt + one reprompt
    assert any("giving up" in t for t in speech)
    rejects = [e for e in report["events"] if e["kind"] == "reject"]
    assert rejects and rejects[-1]["reason"] == "session_aborted"


def test_low_confidence_interpretation_rejected():
    scenario = demo_scenario(
        script=[{"trigger_window_index": 5, "skill_id": "get_time", "entities": {}, "confidence": 0.2}]
    )
    report = run_scenario(reference_pipeline(), scenario)
    assert report["skill_invocations"] == []
    assert any(
        e["kind"] == "reject" and e["reason"] == "low_confidence" for e in report["events"]
    )


def test_rms_detector_pipeline_with_tone_bursts():
    scenario = load_scenario({
        "audio": {
            "synthetic": {
                "kind": "bursts",
                "duration_s": 4.0,
                "bursts": [{"start_s": 2.0, "end_s": 2.5, "freq_hz": 440.0, "amp": 0.8}],
            }
        },
        "interpreter_script": [
            {"trigger_window_index": 5, "skill_id": "get_time", "entities": {}, "confidence": 0.9}
        ],
        "seed": 1,
    })
    graph = reference_pipeline(detector={"kind": "rms", "threshold": 0.1})
    report = run_scenario(graph, scenario)
    assert report["latches"]["s_win_gated"]["openings"] == 1
    assert [i["skill_id"] for i in report["skill_invocations"]] == ["get_time"]


def test_led_state_stream():
    report = run_scenario(reference_pipeline(), demo_scenario())
    states = [(s["t_us"], s["state"]) for s in report["led_states"]]
    assert states[0] == (0, "awaiting")
    assert ("receiving" in {s for _, s in states}) and ("executing" in {s for _, s in states})
    assert states[-1][1] == "awaiting"


def test_watchdog_on_windows_stream_stays_quiet():
    report = run_scenario(reference_pipeline(), demo_scenario())
    assert report["streams"]["s_windows"]["violations"] == []


def test_high_level_skill_cannot_reach_devices():
    from flowbot.skills import SkillDescriptor, SkillRegistry, register_demo_skills

    registry = SkillRegistry()
    register_demo_skills(registry)
    registry.register(
        SkillDescriptor(id="rogue"),  # high level by default
        lambda entities, ctx: ctx.emit_locomotion(None),
    )
    scenario = demo_scenario(
        script=[{"trigger_window_index": 5, "skill_id": "rogue", "entities": {}, "confidence": 1.0}]
    )
    report = run_scenario(reference_pipeline(), scenario, registry=registry)
    assert report["uart_hex"] == ""
    assert len(report["skill_failures"]) == 1
    assert "emit_locomotion" in report["skill_failures"][0]["error"]


# -- resampler node ----------------------------------------------------------------


class FakeCtx:
    def __init__(self):
        self.emitted = []

    def emit(self, port, payload, timestamp_us=None):
        self.emitted.append((port, payload))

    def now_us(self):
        return 0

    def log(self, kind, **fields):
        pass


def test_streaming_resampler_node_preserves_tone():
    from flowbot.harness.nodes import ResamplerNode
    from flowbot.flowcore import Packet

    rate = 48000
    t = np.arange(rate) / rate
    samples = 0.5 * np.sin(2 * np.pi * 1000.0 * t)
    node = ResamplerNode("rs", {}, {})
    ctx = FakeCtx()
    for start in range(0, rate, 4800):
        chunk = SampleChunk(samples=samples[start : start + 4800],
                            sample_rate_hz=48000, start_sample=start)
        node.on_packet("in", Packet(payload=chunk, timestamp_us=0, seq=0), ctx)
    out = np.concatenate([payload.samples for _, payload in ctx.emitted])
    assert len(out) == 16000
    assert all(payload.sample_rate_hz == 16000 for _, payload in ctx.emitted)
    spectrum = np.abs(np.fft.rfft(out))
    assert abs(float(np.argmax(spectrum)) - 1000.0) <= 1.0  # 1 Hz bins
    mid = out[1000:15000]
    gain_db = 20 * np.log10(np.sqrt(np.mean(mid**2)) / (0.5 / np.sqrt(2)))
    assert abs(gain_db) <= 1.0


def test_resampler_in_graph_feeds_16k_aggregator():
    from flowbot.flowcore import (
        GraphDef, NodeDef, StreamDef, LosslessPolicy, StopCondition, graph_run,
    )

    rate = 48000
    t = np.arange(2 * rate) / rate
    audio = AudioBuffer(samples=0.5 * np.sin(2 * np.pi * 1000.0 * t), sample_rate_hz=rate)
    lossless = LosslessPolicy(deadline_us=10**9)
    graph = GraphDef(
        nodes=(
            NodeDef("mic", "audio_source", {"chunk_samples": 4800, "pad_to_samples": 0}),
            NodeDef("iomgr", "io_manager", {"routing": {"mic0": ["ui_audio"]}}),
            NodeDef("rs", "resampler_48to16", {}),
            NodeDef("agg", "aggregator", {
                "window_samples": 8000, "hop_samples": 8000, "sample_rate_hz": 16000,
            }),
            NodeDef("att", "attention", {"detector": {"kind": "rms", "threshold": 0.2}}),
            NodeDef("snk", "sink", {}),
        ),
        streams=(
            StreamDef("a", "mic", "out", "iomgr", "in", lossless),
            StreamDef("b", "iomgr", "ui_audio", "rs", "in", lossless),
            StreamDef("c", "rs", "out", "agg", "in", lossless),
            StreamDef("d", "agg", "windows", "att", "in", lossless),
            StreamDef("e", "att", "bit", "snk", "in", lossless),
        ),
    )
    report = graph_run(graph, kinds=harness_kind_registry(), env={"audio": audio},
                       stop=StopCondition(time_limit_us=5_000_000))
    assert report.status == "ok"
    # 96000 input samples -> 32000 resampled -> 4 windows -> 4 bits
    assert report.streams["d"]["pushed"] == 4
    assert report.streams["e"]["pushed"] == 4


def test_unrouted_device_dead_letters_in_graph():
    from flowbot.flowcore import (
        GraphDef, NodeDef, StreamDef, LosslessPolicy, StopCondition, graph_run,
    )

    audio = AudioBuffer(samples=np.zeros(8000), sample_rate_hz=16000)
    graph = GraphDef(
        nodes=(
            NodeDef("mic", "audio_source", {"device_id": "cam0", "chunk_samples": 1600,
                                            "pad_to_samples": 0}),
            NodeDef("iomgr", "io_manager", {"routing": {"mic0": ["ui_audio"]}}),
            NodeDef("snk", "sink", {}),
        ),
        streams=(
            StreamDef("a", "mic", "out", "iomgr", "in", LosslessPolicy(deadline_us=10**9)),
            StreamDef("b", "iomgr", "ui_audio", "snk", "in", LosslessPolicy(deadline_us=10**9)),
        ),
    )
    report = graph_run(graph, kinds=harness_kind_registry(), env={"audio": audio},
                       stop=StopCondition(time_limit_us=2_000_000))
    assert report.extras["io_manager"] == [{"delivered": 0, "dead_letter": 5}]
    assert report.streams["b"]["pushed"] == 0
    assert sum(e["kind"] == "dead_letter" for e in report.events) == 5


def test_cli_run_and_validate(tmp_path, capsys):
    scenario_path = tmp_path / "scenario.json"
    scenario_path.write_text(json.dumps({
        "audio": {"synthetic": {"kind": "silence", "duration_s": 4.0}},
        "annotations": [{"start_s": 2.0, "end_s": 2.5}],
        "interpreter_script": [
            {"trigger_window_index": 5, "skill_id": "get_time", "entities": {}, "confidence": 0.9}
        ],
        "seed": 0,
    }))
    graph_path = tmp_path / "graph.json"
    graph_path.write_text(json.dumps(reference_pipeline().to_json()))
    report_path = tmp_path / "report.json"

    code = cli_main([
        "run", "--graph", str(graph_path), "--scenario", str(scenario_path),
        "--report", str(report_path),
    ])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["status"] == "ok"
    assert [i["skill_id"] for i in report["skill_invocations"]] == ["get_time"]

    assert cli_main(["validate", "--graph", str(graph_path)]) == 0
    assert "ok" in capsys.readouterr().out

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"nodes": [], "latches": []}))
    assert cli_main(["validate", "--graph", str(bad)]) == 2


def test_cli_run_uses_packaged_default_graph(tmp_path):
    scenario_path = tmp_path / "scenario.json"
    scenario_path.write_text(json.dumps({
        "audio": {"synthetic": {"kind": "silence", "duration_s": 1.0}},
        "seed": 0,
    }))
    assert cli_main(["run", "--scenario", str(scenario_path),
                     "--report", str(tmp_path / "r.json")]) == 0


def test_cli_params(capsys):
    assert cli_main(["params"]) == 0
    out = capsys.readouterr().out
    assert "15360" in out and "250304" in out and "pinned" in out


def test_cli_scan(tmp_path, capsys):
    scene = tmp_path / "scene.json"
    scene.write_text(json.dumps({
        "climb_height_m": 0.05,
        "ultrasonic_scene": [
            {"theta_deg": 0, "distance_m": 1.0},
            {"theta_deg": 45, "distance_m": 1.0},
            {"theta_deg": 75, "distance_m": None},
        ],
    }))
    out_csv = tmp_path / "scan.csv"
    assert cli_main(["scan", "--scene", str(scene), "--mode", "paper",
                     "--out", str(out_csv)]) == 0
    lines = out_csv.read_text().strip().split("\n")
    assert lines[0].startswith("theta_deg,")
    assert len(lines) == 4
    assert "obstacle" in lines[2] and "no_echo" in lines[3]

    assert cli_main(["scan", "--scene", str(scene), "--mode", "trig"]) == 0
    assert "climbable" in capsys.readouterr().out


def test_cli_rejects_missing_files(tmp_path):
    assert cli_main(["run", "--scenario", str(tmp_path / "nope.json")]) == 2
    assert cli_main(["scan", "--scene", str(tmp_path / "nope.json")]) == 2
