"""Graph validation diagnostics and the deterministic executor."""

import pytest

from flowbot.flowcore import (
    GraphDef,
    GraphValidationError,
    LatchDef,
    LosslessPolicy,
    LossyPolicy,
    Node,
    NodeDef,
    PortSpec,
    StopCondition,
    StreamDef,
    VirtualClock,
    WatchdogConfig,
    default_kind_registry,
    graph_run,
    validate_graph,
)

LOSSLESS = LosslessPolicy(deadline_us=10**9)


def simple_graph(policy=LOSSLESS, sink_params=None, count=100, rate_hz=1000.0, watchdog=None):
    return GraphDef(
        nodes=(
            NodeDef("src", "source", {"count": count, "rate_hz": rate_hz}),
            NodeDef("snk", "sink", sink_params or {}),
        ),
        streams=(StreamDef("s", "src", "out", "snk", "in", policy, watchdog=watchdog),),
    )


# -- validation --------------------------------------------------------------


def test_valid_graph_has_no_diagnostics():
    assert validate_graph(simple_graph(), default_kind_registry()) == []


def test_unknown_endpoint_node():
    g = GraphDef(
        nodes=(NodeDef("src", "source", {"count": 1}),),
        streams=(StreamDef("s", "src", "out", "xyz", "in", LOSSLESS),),
    )
    diags = validate_graph(g, default_kind_registry())
    assert any(d.code == "UnresolvedEndpoint" and "xyz" in d.reason for d in diags)


def test_two_producers_on_one_stream_id():
    g = GraphDef(
        nodes=(
            NodeDef("a", "source", {"count": 1}),
            NodeDef("b", "source", {"count": 1}),
            NodeDef("snk", "sink", {}),
        ),
        streams=(
            StreamDef("s", "a", "out", "snk", "in", LOSSLESS),
            StreamDef("s", "b", "out", "snk", "in", LOSSLESS),
        ),
    )
    diags = validate_graph(g, default_kind_registry())
    assert any(d.code == "MultipleProducers" for d in diags)


def test_unknown_kind_and_bad_params():
    g = GraphDef(nodes=(NodeDef("x", "warp_drive", {}),))
    assert any(d.code == "UnknownNodeKind" for d in validate_graph(g, default_kind_registry()))
    g = GraphDef(nodes=(NodeDef("x", "source", {"count": 5, "rate_hz": -1}),))
    assert any(d.code == "BadNodeParams" for d in validate_graph(g, default_kind_registry()))


def test_unconnected_required_port():
    g = GraphDef(nodes=(NodeDef("src", "source", {"count": 1}), NodeDef("snk", "sink", {})))
    diags = validate_graph(g, default_kind_registry())
    assert sum(d.code == "UnconnectedPort" for d in diags) == 2


def test_fanout_without_splitter_is_flagged():
    g = GraphDef(
        nodes=(
            NodeDef("src", "source", {"count": 1}),
            NodeDef("a", "sink", {}),
            NodeDef("b", "sink", {}),
        ),
        streams=(
            StreamDef("s1", "src", "out", "a", "in", LOSSLESS),
            StreamDef("s2", "src", "out", "b", "in", LOSSLESS),
        ),
    )
    diags = validate_graph(g, default_kind_registry())
    assert any(d.code == "PortConflict" and "splitter" in d.reason for d in diags)


def test_latch_control_must_carry_bits():
    g = GraphDef(
        nodes=(
            NodeDef("src", "source", {"count": 1}),
            NodeDef("ctl", "source", {"count": 1}),
            NodeDef("snk", "sink", {}),
        ),
        streams=(
            StreamDef("s_data", "src", "out", "snk", "in", LOSSLESS),
            StreamDef("s_ctl", "ctl", "out", None, None, LOSSLESS),
        ),
        latches=(LatchDef("s_data", "s_ctl"),),
    )
    diags = validate_graph(g, default_kind_registry())
    assert any(d.code == "ControlNotBits" for d in diags)


def test_self_loop_on_same_port_is_flagged():
    g = GraphDef(
        nodes=(NodeDef("split", "splitter", {"outputs": ["in"]}),),
        streams=(StreamDef("s", "split", "in", "split", "in", LOSSLESS),),
    )
    diags = validate_graph(g, default_kind_registry())
    assert any(d.code == "SelfLoop" for d in diags)


def test_consumerless_stream_without_latch_is_flagged():
    g = GraphDef(
        nodes=(NodeDef("src", "source", {"count": 1}),),
        streams=(StreamDef("s", "src", "out", None, None, LOSSLESS),),
    )
    diags = validate_graph(g, default_kind_registry())
    assert any(d.code == "UnconnectedStream" for d in diags)


# -- execution ---------------------------------------------------------------


def test_empty_graph_runs_to_zero_counts():
    report = graph_run(GraphDef(), stop=StopCondition(time_limit_us=1_000_000))
    assert report.status == "ok"
    assert report.streams == {} and report.events == []


def test_source_to_sink_conservation():
    report = graph_run(simple_graph())
    s = report.streams["s"]
    assert s == {"pushed": 100, "delivered": 100, "dropped": 0, "queued": 0, "violations": []}


def test_lossy_slow_sink_drop_scenario():
    # 100 packets at 1 kHz into capacity-1 stream, sink polls at 10 Hz for 1 s:
    # the schedule fixes delivery of the first packet and the last survivor.
    report = graph_run(
        simple_graph(policy=LossyPolicy(capacity=1), sink_params={"poll_rate_hz": 10.0}),
        stop=StopCondition(time_limit_us=1_000_000),
    )
    s = report.streams["s"]
    assert s["pushed"] == 100
    assert s["pushed"] == s["delivered"] + s["dropped"] + s["queued"]
    assert (s["delivered"], s["dropped"], s["queued"]) == (2, 98, 0)


def test_lossy_slow_sink_full_second_source():
    report = graph_run(
        simple_graph(
            policy=LossyPolicy(capacity=1), sink_params={"poll_rate_hz": 10.0}, count=1000
        ),
        stop=StopCondition(time_limit_us=1_000_000),
    )
    s = report.streams["s"]
    assert s["pushed"] == 1000
    assert s["delivered"] == 10
    assert s["pushed"] == s["delivered"] + s["dropped"] + s["queued"]


def test_lossy_memory_bounded_regardless_of_rate():
    report = graph_run(
        simple_graph(policy=LossyPolicy(capacity=3), sink_params={"poll_rate_hz": 1.0}, count=500),
        stop=StopCondition(time_limit_us=2_000_000),
    )
    assert report.streams["s"]["queued"] <= 3


def test_run_is_deterministic():
    def once():
        return graph_run(
            simple_graph(policy=LossyPolicy(capacity=2), sink_params={"poll_rate_hz": 50.0}),
            stop=StopCondition(time_limit_us=1_000_000),
            seed=42,
        ).to_json_str()

    assert once() == once()


def test_watchdog_passivity_at_graph_level():
    wd = WatchdogConfig(max_latency_us=1, min_throughput_hz=10_000.0, window_us=1000)
    with_wd = graph_run(simple_graph(watchdog=wd))
    without = graph_run(simple_graph())
    strip = lambda s: {k: v for k, v in s.items() if k not in ("violations", "monitor_errors")}
    assert strip(with_wd.streams["s"]) == strip(without.streams["s"])
    assert with_wd.streams["s"]["violations"]  # the monitor did fire


def test_lossless_deadline_violations_in_graph():
    report = graph_run(
        simple_graph(
            policy=LosslessPolicy(deadline_us=1000),
            sink_params={"poll_rate_hz": 10.0},
            count=10,
        ),
        stop=StopCondition(time_limit_us=2_000_000),
    )
    s = report.streams["s"]
    assert s["dropped"] == 0 and s["delivered"] == 10
    assert any(v["kind"] == "LatencyExceeded" for v in s["violations"])


def test_splitter_duplicates_packets():
    g = GraphDef(
        nodes=(
            NodeDef("src", "source", {"count": 7}),
            NodeDef("split", "splitter", {"outputs": ["a", "b"]}),
            NodeDef("sa", "sink", {}),
            NodeDef("sb", "sink", {}),
        ),
        streams=(
            StreamDef("s0", "src", "out", "split", "in", LOSSLESS),
            StreamDef("sa_in", "split", "a", "sa", "in", LOSSLESS),
            StreamDef("sb_in", "split", "b", "sb", "in", LOSSLESS),
        ),
    )
    report = graph_run(g)
    assert report.streams["sa_in"]["delivered"] == 7
    assert report.streams["sb_in"]["delivered"] == 7


class ExplodingNode(Node):
    def __init__(self, node_id, params, env):
        super().__init__(node_id)
        self.after = int(params.get("after", 3))
        self.seen = 0

    def input_ports(self):
        return {"in": PortSpec()}

    def on_packet(self, port, packet, ctx):
        self.seen += 1
        if self.seen >= self.after:
            raise RuntimeError("node blew up")


def test_node_failure_halts_with_partial_report():
    kinds = default_kind_registry()
    kinds.register("exploder", ExplodingNode)
    g = GraphDef(
        nodes=(NodeDef("src", "source", {"count": 100}), NodeDef("bad", "exploder", {"after": 3})),
        streams=(StreamDef("s", "src", "out", "bad", "in", LOSSLESS),),
    )
    report = graph_run(g, kinds=kinds)
    assert report.status == "failed"
    assert report.failed_node == "bad"
    assert report.stop_reason == "node_failure"
    assert any(e["kind"] == "node_error" for e in report.events)
    assert report.streams["s"]["delivered"] == 3  # partial counters survive


def test_validation_error_raised_before_run():
    g = GraphDef(
        nodes=(NodeDef("src", "source", {"count": 1}),),
        streams=(StreamDef("s", "src", "out", "nope", "in", LOSSLESS),),
    )
    with pytest.raises(GraphValidationError):
        graph_run(g)


def test_packet_budget_stop():
    report = graph_run(simple_graph(count=1000), stop=StopCondition(max_packets=50))
    assert report.stop_reason == "packet_budget"
    assert report.streams["s"]["pushed"] == 50


def test_time_limit_is_exclusive():
    # 10 packets at 1 kHz: emissions at 0..9 ms; a 5 ms limit cuts at t=5ms
    report = graph_run(
        simple_graph(count=10), stop=StopCondition(time_limit_us=5_000)
    )
    assert report.stop_reason == "time_limit"
    assert report.streams["s"]["pushed"] == 5  # t = 0..4 ms only
    assert report.end_time_us == 5_000


class BitScriptNode(Node):
    """Emits scripted (t_us, bit) pairs on a bit-typed output."""

    def __init__(self, node_id, params, env):
        super().__init__(node_id)
        self.script = sorted(params.get("script", []))
        self._next = 0

    def output_ports(self):
        return {"bit": PortSpec("bit")}

    def start(self, ctx):
        if self.script:
            ctx.schedule_at(self.script[0][0])

    def on_timer(self, tag, ctx):
        t_us, bit = self.script[self._next]
        ctx.emit("bit", bit, timestamp_us=t_us)
        self._next += 1
        if self._next < len(self.script):
            ctx.schedule_at(self.script[self._next][0])


def test_latched_stream_with_lagging_consumer_respects_timestamps():
    # data at 0..4 ms, gate opens at 2 ms, consumer polls slowly afterwards:
    # a control must never apply to data that predates it, however late the
    # consumer drains the queue
    kinds = default_kind_registry()
    kinds.register("bit_script", BitScriptNode)
    g = GraphDef(
        nodes=(
            NodeDef("src", "source", {"count": 5, "rate_hz": 1000.0}),
            NodeDef("ctl", "bit_script", {"script": [(2_000, 1)]}),
            NodeDef("snk", "sink", {"poll_rate_hz": 100.0}),
        ),
        streams=(
            StreamDef("s_data", "src", "out", "snk", "in", LOSSLESS),
            StreamDef("s_ctl", "ctl", "bit", None, None, LOSSLESS),
        ),
        latches=(LatchDef("s_data", "s_ctl"),),
    )
    report = graph_run(g, kinds=kinds, stop=StopCondition(time_limit_us=200_000))
    latch = report.latches["s_data"]
    # data at 0 and 1 ms precede the open bit; 2, 3, 4 ms pass (tie inclusive)
    assert latch["suppressed"] == 2
    assert latch["forwarded"] == 3
    assert latch["transitions"] == [{"t_us": 2_000, "state": "open"}]


def test_real_clock_mode_matches_virtual_counters():
    # soak-style check: the same graph paced by the monotonic clock produces
    # the same counters as the virtual run (not the same wall timing)
    from flowbot.flowcore import MonotonicClock

    def counters(clock):
        return graph_run(simple_graph(count=30, rate_hz=10_000.0), clock=clock).streams["s"]

    assert counters(MonotonicClock()) == counters(VirtualClock())


def test_fifo_per_stream_in_run_events():
    clock = VirtualClock()
    report = graph_run(
        simple_graph(policy=LossyPolicy(capacity=4), sink_params={"poll_rate_hz": 100.0}),
        clock=clock,
        stop=StopCondition(time_limit_us=1_000_000),
    )
    dropped_seqs = [e["seq"] for e in report.events if e["kind"] == "drop"]
    assert dropped_seqs == sorted(dropped_seqs)
