"""Deterministic graph executor.

Execution is event-driven: timers and per-push delivery events sit in one
queue ordered by (time, consumer topological rank, phase, insertion order).
At equal timestamps, upstream nodes act before downstream ones and latch
control application precedes gated-data delivery, so a gate opened by a
window's own attention bit admits that window. With a virtual clock and a
fixed seed the event log is identical across runs.

A node runs on at most one execution context at a time; the single-threaded
loop guarantees that directly. A real (monotonic) clock paces the same loop
against wall time; counters are identical, only wall timing differs.
"""

from __future__ import annotations

import heapq
import json
import time as _time
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from ..dsp.detect import rms_detect
from .aggregator import Aggregator, AggregatorConfig, AggWindow, SampleChunk
from .attention import attention_decide
from .clock import VirtualClock
from .graphdef import GraphDef, LatchDef, StreamDef
from .latch import Latch
from .node import Node, NodeKindRegistry, PortSpec
from .packet import Packet
from .stream import Stream, PushOutcome, PushStatus
from .validation import Diagnostic, validate_graph
from .watchdog import Watchdog

# Phase within one timestamp: latch controls apply before anything else,
# then timers, then packet deliveries.
_PHASE_CONTROL = 0
_PHASE_TIMER = 1
_PHASE_DELIVERY = 2


class GraphValidationError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class StopCondition:
    """Run until source exhaustion unless a time limit or packet budget hits.

    The time limit is exclusive: events at exactly ``time_limit_us`` do not
    run.
    """

    time_limit_us: Optional[int] = None
    max_packets: Optional[int] = None


class RunCollector:
    """Mutable run-wide sinks that nodes append to via their context."""

    def __init__(self):
        self.skill_invocations: list[dict] = []
        self.skill_failures: list[dict] = []
        self.uart = bytearray()
        self.extras: dict[str, list] = {}

    def channel(self, name: str) -> list:
        return self.extras.setdefault(name, [])


@dataclass
class RunReport:
    status: str
    stop_reason: str
    end_time_us: int
    seed: int
    streams: dict
    latches: dict
    skill_invocations: list
    skill_failures: list
    uart_hex: str
    extras: dict
    events: list
    failed_node: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "stop_reason": self.stop_reason,
            "end_time_us": self.end_time_us,
            "seed": self.seed,
            "failed_node": self.failed_node,
            "streams": self.streams,
            "latches": self.latches,
            "skill_invocations": self.skill_invocations,
            "skill_failures": self.skill_failures,
            "uart_hex": self.uart_hex,
            "extras": self.extras,
            "events": self.events,
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def conservation_ok(self) -> bool:
        return all(
            s["pushed"] == s["delivered"] + s["dropped"] + s["queued"]
            for s in self.streams.values()
        )


class NodeContext:
    """Per-node handle into the running graph."""

    def __init__(self, runner: "GraphRunner", node: Node):
        self._runner = runner
        self._node = node
        self.rng = runner.rng
        self.collector = runner.collector

    def now_us(self) -> int:
        return self._runner.clock.now_us()

    @property
    def time_limit_us(self) -> Optional[int]:
        return self._runner.stop.time_limit_us

    def emit(self, port: str, payload: Any, timestamp_us: Optional[int] = None) -> PushOutcome:
        return self._runner.emit(self._node.id, port, payload, timestamp_us)

    def schedule(self, delay_us: int, tag=None) -> None:
        self.schedule_at(self.now_us() + int(delay_us), tag)

    def schedule_at(self, t_us: int, tag=None) -> None:
        self._runner.schedule_timer(self._node, max(t_us, self.now_us()), tag)

    def poll(self, port: str) -> Optional[Packet]:
        return self._runner.poll_input(self._node.id, port)

    def log(self, kind: str, **fields) -> None:
        self._runner.log_event(kind, node=self._node.id, **fields)


class GraphRunner:
    def __init__(
        self,
        graph: GraphDef,
        kinds: Optional[NodeKindRegistry] = None,
        clock=None,
        stop: Optional[StopCondition] = None,
        seed: int = 0,
        env: Optional[dict] = None,
        validate_first: bool = True,
    ):
        self.graph = graph
        self.kinds = kinds if kinds is not None else default_kind_registry()
        self.clock = clock if clock is not None else VirtualClock()
        self.stop = stop if stop is not None else StopCondition()
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.env = dict(env or {})
        self.collector = RunCollector()
        self.events: list[dict] = []
        self._heap: list = []
        self._heap_seq = 0
        self._total_pushed = 0
        self._failed_node: Optional[str] = None
        self._stop_reason: Optional[str] = None
        self._end_time_us: Optional[int] = None

        if validate_first:
            diags = validate_graph(graph, self.kinds, self.env)
            if diags:
                raise GraphValidationError(diags)

        self.nodes: dict[str, Node] = {
            nd.id: self.kinds.create(nd.kind, nd.id, nd.params, self.env) for nd in graph.nodes
        }
        self.streams: dict[str, Stream] = {}
        self._stream_defs: dict[str, StreamDef] = {}
        self._next_seq: dict[str, int] = {}
        self._out_streams: dict[tuple[str, str], str] = {}
        self._in_streams: dict[tuple[str, str], str] = {}
        for sd in graph.streams:
            watchdog = Watchdog(sd.watchdog) if sd.watchdog is not None else None
            self.streams[sd.id] = Stream(sd.id, sd.policy, clock=self.clock, watchdog=watchdog)
            self._stream_defs[sd.id] = sd
            self._next_seq[sd.id] = 0
            self._out_streams[(sd.from_node, sd.from_port)] = sd.id
            if sd.to_node is not None:
                self._in_streams[(sd.to_node, sd.to_port)] = sd.id

        self.latches: dict[str, Latch] = {}
        self._latch_defs: dict[str, LatchDef] = {}
        self._control_to_gated: dict[str, str] = {}
        for ld in graph.latches:
            self.latches[ld.stream_id] = Latch(ld.initial_state)
            self._latch_defs[ld.stream_id] = ld
            self._control_to_gated[ld.control_stream_id] = ld.stream_id

        self._topo = self._topo_ranks()
        self._ctx: dict[str, NodeContext] = {
            node_id: NodeContext(self, node) for node_id, node in self.nodes.items()
        }

    # -- ordering ---------------------------------------------------------

    def _topo_ranks(self) -> dict[str, int]:
        order = [nd.id for nd in self.graph.nodes]
        deps: dict[str, set[str]] = {n: set() for n in order}
        for sd in self.graph.streams:
            consumer = sd.to_node
            if consumer is None:
                gated = self._control_to_gated.get(sd.id)
                if gated is not None:
                    gated_def = self._stream_defs.get(gated)
                    consumer = gated_def.to_node if gated_def else None
            if consumer is not None and sd.from_node in deps and consumer in deps:
                if consumer != sd.from_node:
                    deps[consumer].add(sd.from_node)
        ranks: dict[str, int] = {}
        remaining = list(order)
        while remaining:
            ready = [n for n in remaining if deps[n] <= set(ranks)]
            if not ready:
                ready = [remaining[0]]  # cycle: fall back to declaration order
            for n in ready:
                ranks[n] = len(ranks)
            remaining = [n for n in remaining if n not in ranks]
        return ranks

    def _push_event(self, t_us: int, rank: int, phase: int, fn: Callable) -> None:
        self._heap_seq += 1
        heapq.heappush(self._heap, (t_us, rank, phase, self._heap_seq, fn))

    # -- node-facing operations -------------------------------------------

    def schedule_timer(self, node: Node, t_us: int, tag) -> None:
        rank = self._topo[node.id]
        self._push_event(t_us, rank, _PHASE_TIMER, lambda: self._run_node(node, node.on_timer, tag))

    def emit(self, node_id: str, port: str, payload: Any, timestamp_us: Optional[int]) -> PushOutcome:
        stream_id = self._out_streams.get((node_id, port))
        if stream_id is None:
            raise KeyError(f"node {node_id!r} has no stream on output port {port!r}")
        stream = self.streams[stream_id]
        now = self.clock.now_us()
        ts = now if timestamp_us is None else int(timestamp_us)
        packet = Packet(payload=payload, timestamp_us=ts, seq=self._next_seq[stream_id])
        self._next_seq[stream_id] += 1
        outcome = stream.push(packet, now_us=now)
        if outcome.status is PushStatus.REJECTED:
            return outcome
        self._total_pushed += 1
        if outcome.status is PushStatus.DROPPED_OLDEST:
            self.log_event(
                "drop", stream=stream_id, seq=outcome.dropped.seq,
                successive_misses=outcome.successive_misses,
            )

        gated_id = self._control_to_gated.get(stream_id)
        if gated_id is not None:
            consumer = self._stream_defs[gated_id].to_node
            rank = self._topo.get(consumer, 0) if consumer else 0
            self._push_event(ts, rank, _PHASE_CONTROL, lambda: self._apply_pending_controls(gated_id))
            return outcome

        sd = self._stream_defs[stream_id]
        if sd.to_node is not None and not self.nodes[sd.to_node].poll_driven:
            rank = self._topo[sd.to_node]
            self._push_event(ts, rank, _PHASE_DELIVERY, lambda: self._deliver(stream_id))
        return outcome

    def poll_input(self, node_id: str, port: str) -> Optional[Packet]:
        stream_id = self._in_streams.get((node_id, port))
        if stream_id is None:
            raise KeyError(f"node {node_id!r} has no stream on input port {port!r}")
        return self._pop_through_latch(stream_id)

    def log_event(self, kind: str, **fields) -> None:
        entry = {"t_us": self.clock.now_us(), "kind": kind}
        entry.update(fields)
        self.events.append(entry)

    # -- delivery ----------------------------------------------------------

    def _apply_pending_controls(self, gated_id: str) -> None:
        """Apply queued controls that no longer have earlier-stamped data
        waiting in front of them; the rest wait for the queue to drain."""
        self._drain_controls(gated_id, up_to_ts=self.streams[gated_id].peek_timestamp())

    def _drain_controls(self, gated_id: str, up_to_ts: Optional[int] = None) -> None:
        latch = self.latches[gated_id]
        control_id = self._latch_defs[gated_id].control_stream_id
        control = self.streams[control_id]
        now = self.clock.now_us()
        limit = now if up_to_ts is None else min(now, up_to_ts)
        while True:
            ts = control.peek_timestamp()
            if ts is None or ts > limit:
                return
            packet = control.pop(now_us=now)
            if packet is None:
                return
            if latch.apply_control(packet.payload, packet.timestamp_us):
                self.log_event(
                    "latch", stream=gated_id, state=latch.state.value, bit=int(bool(packet.payload))
                )

    def _pop_through_latch(self, stream_id: str) -> Optional[Packet]:
        stream = self.streams[stream_id]
        latch = self.latches.get(stream_id)
        if latch is None:
            return stream.pop(now_us=self.clock.now_us())
        # a control applies to data with later-or-equal timestamps only, so
        # drain no further than the packet about to be popped
        self._drain_controls(stream_id, up_to_ts=stream.peek_timestamp())
        packet = stream.pop(now_us=self.clock.now_us())
        if packet is None:
            return None
        forwarded = latch.forward(packet)
        if forwarded is None:
            self.log_event("suppressed", stream=stream_id, seq=packet.seq)
            return None
        return forwarded

    def _deliver(self, stream_id: str) -> None:
        sd = self._stream_defs[stream_id]
        packet = self._pop_through_latch(stream_id)
        if packet is None or sd.to_node is None:
            return
        node = self.nodes[sd.to_node]
        self._run_node(node, node.on_packet, sd.to_port, packet)

    def _run_node(self, node: Node, fn: Callable, *args) -> None:
        try:
            fn(*args, self._ctx[node.id])
        except Exception as exc:
            self._failed_node = node.id
            self._stop_reason = "node_failure"
            self.log_event("node_error", node=node.id, error=f"{type(exc).__name__}: {exc}")

    # -- main loop ----------------------------------------------------------

    def run(self) -> RunReport:
        for node in self.nodes.values():
            self._run_node(node, node.start)
            if self._stop_reason:
                break

        realtime = not getattr(self.clock, "is_virtual", False)
        while self._heap and self._stop_reason is None:
            t_us, _rank, _phase, _seq, fn = heapq.heappop(self._heap)
            limit = self.stop.time_limit_us
            if limit is not None and t_us >= limit:
                self._stop_reason = "time_limit"
                self._end_time_us = limit
                break
            if realtime:
                lag = (t_us - self.clock.now_us()) / 1e6
                if lag > 0:
                    _time.sleep(lag)
            else:
                self.clock.advance_to(max(t_us, self.clock.now_us()))
            fn()
            if self.stop.max_packets is not None and self._total_pushed >= self.stop.max_packets:
                self._stop_reason = "packet_budget"
        if self._stop_reason is None:
            self._stop_reason = "exhausted"
        if self._end_time_us is None:
            self._end_time_us = self.clock.now_us()

        for node in self.nodes.values():
            if self._failed_node is None:
                node.finish(self._ctx[node.id])
        for stream in self.streams.values():
            stream.finalize(self._end_time_us)
        return self._assemble_report()

    def _assemble_report(self) -> RunReport:
        streams = {}
        for sid, stream in sorted(self.streams.items()):
            entry = stream.counters()
            entry["violations"] = [v.to_json() for v in stream.violations]
            if stream.watchdog is not None and stream.watchdog.errors:
                entry["monitor_errors"] = list(stream.watchdog.errors)
            streams[sid] = entry
        latches = {sid: latch.to_json() for sid, latch in sorted(self.latches.items())}
        return RunReport(
            status="failed" if self._failed_node else "ok",
            stop_reason=self._stop_reason or "exhausted",
            end_time_us=self._end_time_us or 0,
            seed=self.seed,
            streams=streams,
            latches=latches,
            skill_invocations=list(self.collector.skill_invocations),
            skill_failures=list(self.collector.skill_failures),
            uart_hex=self.collector.uart.hex(),
            extras={k: list(v) for k, v in sorted(self.collector.extras.items())},
            events=list(self.events),
            failed_node=self._failed_node,
        )


def graph_run(
    graph: GraphDef,
    kinds: Optional[NodeKindRegistry] = None,
    clock=None,
    stop: Optional[StopCondition] = None,
    seed: int = 0,
    env: Optional[dict] = None,
    validate_first: bool = True,
) -> RunReport:
    """Validate, build and execute a graph to completion. See GraphRunner."""
    runner = GraphRunner(
        graph, kinds=kinds, clock=clock, stop=stop, seed=seed, env=env,
        validate_first=validate_first,
    )
    return runner.run()


# -- built-in node kinds ----------------------------------------------------


class SourceNode(Node):
    """Emits ``count`` integer-payload packets at ``rate_hz``."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        self.count = int(params.get("count", 0))
        self.rate_hz = float(params.get("rate_hz", 1000.0))
        if self.rate_hz <= 0:
            raise ValueError("source rate_hz must be > 0")
        self.start_us = int(params.get("start_us", 0))
        self._emitted = 0

    def output_ports(self):
        return {"out": PortSpec("any")}

    def start(self, ctx):
        if self.count > 0:
            ctx.schedule_at(self.start_us)

    def on_timer(self, tag, ctx):
        if self._emitted >= self.count:
            return
        ctx.emit("out", self._emitted)
        self._emitted += 1
        if self._emitted < self.count:
            next_t = self.start_us + round(self._emitted * 1e6 / self.rate_hz)
            ctx.schedule_at(next_t)


class SinkNode(Node):
    """Consumes packets; with ``poll_rate_hz`` it pulls one packet per period
    instead of accepting per-push deliveries (a deliberately slow consumer)."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        self.poll_rate_hz = params.get("poll_rate_hz")
        self.poll_driven = self.poll_rate_hz is not None
        if self.poll_driven and float(self.poll_rate_hz) <= 0:
            raise ValueError("sink poll_rate_hz must be > 0")
        self.consumed = 0
        self._polls = 0

    def input_ports(self):
        return {"in": PortSpec("any")}

    def start(self, ctx):
        if self.poll_driven:
            ctx.schedule_at(0)

    def on_packet(self, port, packet, ctx):
        self.consumed += 1

    def on_timer(self, tag, ctx):
        if ctx.poll("in") is not None:
            self.consumed += 1
        self._polls += 1
        next_t = round(self._polls * 1e6 / float(self.poll_rate_hz))
        if ctx.time_limit_us is None or next_t < ctx.time_limit_us:
            ctx.schedule_at(next_t)


class SplitterNode(Node):
    """Explicit fan-out: every input packet is re-emitted on each output."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        self.outputs = list(params.get("outputs", ["out0", "out1"]))
        if not self.outputs:
            raise ValueError("splitter needs at least one output")

    def input_ports(self):
        return {"in": PortSpec("any")}

    def output_ports(self):
        return {name: PortSpec("any") for name in self.outputs}

    def on_packet(self, port, packet, ctx):
        for name in self.outputs:
            ctx.emit(name, packet.payload, timestamp_us=packet.timestamp_us)


class AggregatorNode(Node):
    """Graph wrapper over :class:`Aggregator`; accepts sample chunks."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        self.agg = Aggregator(
            AggregatorConfig(
                window_samples=int(params["window_samples"]),
                hop_samples=int(params["hop_samples"]),
                sample_rate_hz=int(params["sample_rate_hz"]),
            )
        )

    def input_ports(self):
        return {"in": PortSpec("samples")}

    def output_ports(self):
        return {"windows": PortSpec("window")}

    def on_packet(self, port, packet, ctx):
        payload = packet.payload
        if isinstance(payload, SampleChunk):
            windows = self.agg.feed(payload.samples, payload.sample_rate_hz)
        else:
            windows = self.agg.feed(payload)
        for window in windows:
            ctx.emit("windows", window)


DETECTOR_FACTORIES: dict[str, Callable] = {}


def register_detector(kind: str, factory: Callable) -> None:
    DETECTOR_FACTORIES[kind] = factory


def _window_samples(payload) -> np.ndarray:
    return payload.samples if isinstance(payload, AggWindow) else np.asarray(payload)


register_detector("constant", lambda spec, env: (lambda w: int(spec.get("value", 1))))
register_detector(
    "rms",
    lambda spec, env: (lambda w: rms_detect(_window_samples(w), float(spec.get("threshold", 0.1)))),
)


def _failing_detector(spec, env):
    def detect(window):
        raise RuntimeError("detector failure")

    return detect


register_detector("failing", _failing_detector)


class AttentionNode(Node):
    """Emits one bit per input window from a pluggable detector."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        spec = dict(params.get("detector", {"kind": "rms"}))
        kind = spec.get("kind")
        if kind not in DETECTOR_FACTORIES:
            raise ValueError(f"unknown detector kind {kind!r}")
        self.detector = DETECTOR_FACTORIES[kind](spec, env)

    def input_ports(self):
        return {"in": PortSpec("window")}

    def output_ports(self):
        return {"bit": PortSpec("bit")}

    def on_packet(self, port, packet, ctx):
        errors: list[Exception] = []
        bit = attention_decide(self.detector, packet.payload, on_error=errors.append)
        for exc in errors:
            ctx.log("attention_error", error=f"{type(exc).__name__}: {exc}")
        ctx.emit("bit", bit, timestamp_us=packet.timestamp_us)


def default_kind_registry() -> NodeKindRegistry:
    reg = NodeKindRegistry()
    reg.register("source", SourceNode)
    reg.register("sink", SinkNode)
    reg.register("splitter", SplitterNode)
    reg.register("aggregator", AggregatorNode)
    reg.register("attention", AttentionNode)
    return reg
