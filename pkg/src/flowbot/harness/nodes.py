"""Simulated device layer and pipeline nodes wired from the dataflow core.

Kinds registered here: audio_source (plays scenario audio as timed chunks),
io_manager (routes device samples to interfaces), resampler_48to16,
interpreter_stub (scripted recognizer), skill_manager, speaker_sink and
uart_sink. Importing this module also registers the "scripted" attention
detector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dsp.resample import lowpass_kernel, FILTER_TAPS, CUTOFF_HZ
from ..flowcore.aggregator import AggWindow, SampleChunk
from ..flowcore.node import Node, NodeKindRegistry, PortSpec
from ..flowcore.runtime import default_kind_registry, register_detector
from ..robotics.locomotion import encode_locomotion, frame_uart
from ..skills.builtin import LowLevelContext, SkillContext, register_demo_skills
from ..skills.manager import Execute, ManagerConfig, Prompt, Reject, SkillManager, TIMEOUT
from ..skills.registry import SkillRegistry
from ..skills.types import Interpretation, SessionState, SkillLevel


@dataclass(frozen=True)
class DeviceSample:
    """Raw sample from one input device, as handed to the I/O manager."""

    device_id: str
    chunk: SampleChunk


def io_manager_route(sample: DeviceSample, routing_table: dict) -> list[tuple[str, SampleChunk]]:
    """Duplicate a device sample to every subscribed interface.

    An unrouted device yields an empty list; the caller counts it as
    dead-lettered.
    """
    interfaces = routing_table.get(sample.device_id, [])
    return [(interface_id, sample.chunk) for interface_id in interfaces]


class AudioSourceNode(Node):
    """Plays scenario audio as chunked device samples under the run clock.

    Chunk k covering samples [k*chunk, (k+1)*chunk) is emitted at the
    virtual time its last sample was captured. Audio is zero-padded to
    ``pad_to_samples`` (one aggregation window by default) and to a whole
    number of chunks.
    """

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        self.device_id = str(params.get("device_id", "mic0"))
        self.chunk_samples = int(params.get("chunk_samples", 1600))
        if self.chunk_samples <= 0:
            raise ValueError("chunk_samples must be > 0")
        pad_to = int(params.get("pad_to_samples", 16000))
        audio = env.get("audio")
        if audio is None:
            raise ValueError("audio_source requires scenario audio in the build environment")
        samples = np.asarray(audio.samples, dtype=np.float64)
        total = max(len(samples), pad_to)
        total = -(-total // self.chunk_samples) * self.chunk_samples
        if total > len(samples):
            samples = np.concatenate([samples, np.zeros(total - len(samples))])
        self.samples = samples
        self.sample_rate_hz = int(audio.sample_rate_hz)
        self._next_chunk = 0

    def output_ports(self):
        return {"out": PortSpec("samples")}

    def start(self, ctx):
        if len(self.samples):
            ctx.schedule_at(self._chunk_end_us(0))

    def _chunk_end_us(self, k: int) -> int:
        return round((k + 1) * self.chunk_samples * 1e6 / self.sample_rate_hz)

    def on_timer(self, tag, ctx):
        k = self._next_chunk
        start = k * self.chunk_samples
        if start >= len(self.samples):
            return
        chunk = SampleChunk(
            samples=self.samples[start : start + self.chunk_samples],
            sample_rate_hz=self.sample_rate_hz,
            start_sample=start,
        )
        ctx.emit("out", DeviceSample(device_id=self.device_id, chunk=chunk))
        self._next_chunk += 1
        if self._next_chunk * self.chunk_samples < len(self.samples):
            ctx.schedule_at(self._chunk_end_us(self._next_chunk))


class IoManagerNode(Node):
    """Dispatches device samples to the interfaces subscribed to them."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        self.routing = {str(k): list(v) for k, v in dict(params.get("routing", {})).items()}
        ports = sorted({p for targets in self.routing.values() for p in targets})
        if not ports:
            raise ValueError("io_manager needs a routing table with at least one interface")
        self._ports = ports
        self.delivered = 0
        self.dead_letter = 0

    def input_ports(self):
        return {"in": PortSpec("samples")}

    def output_ports(self):
        return {name: PortSpec("samples") for name in self._ports}

    def on_packet(self, port, packet, ctx):
        routed = io_manager_route(packet.payload, self.routing)
        if not routed:
            self.dead_letter += 1
            ctx.log("dead_letter", device=packet.payload.device_id)
            return
        for interface_id, chunk in routed:
            self.delivered += 1
            ctx.emit(interface_id, chunk, timestamp_us=packet.timestamp_us)

    def finish(self, ctx):
        ctx.collector.channel("io_manager").append(
            {"delivered": self.delivered, "dead_letter": self.dead_letter}
        )


class ResamplerNode(Node):
    """Streaming 48 kHz -> 16 kHz: causal low-pass then pick every 3rd sample."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        self._kernel = lowpass_kernel(FILTER_TAPS, CUTOFF_HZ, 48000.0)
        self._hist = np.zeros(FILTER_TAPS - 1)
        self._consumed = 0
        self._out_start = 0

    def input_ports(self):
        return {"in": PortSpec("samples")}

    def output_ports(self):
        return {"out": PortSpec("samples")}

    def on_packet(self, port, packet, ctx):
        chunk: SampleChunk = packet.payload
        if chunk.sample_rate_hz != 48000:
            raise ValueError(f"resampler expects 48000 Hz input, got {chunk.sample_rate_hz}")
        x = np.asarray(chunk.samples, dtype=np.float64)
        buf = np.concatenate([self._hist, x])
        # y[j] is the causal filter output at global input index consumed + j
        y = np.convolve(buf, self._kernel, mode="valid")
        first = self._consumed
        offsets = np.arange(len(y))
        keep = (first + offsets) % 3 == 0
        out = y[keep]
        self._consumed += len(x)
        self._hist = buf[-(FILTER_TAPS - 1):]
        if len(out):
            ctx.emit(
                "out",
                SampleChunk(samples=out, sample_rate_hz=16000, start_sample=self._out_start),
                timestamp_us=packet.timestamp_us,
            )
            self._out_start += len(out)


def _overlaps(span: tuple[float, float], start_s: float, end_s: float) -> bool:
    return start_s < span[1] and span[0] < end_s


def scripted_keyword_detector(window_meta, annotations) -> int:
    """1 iff any annotation interval overlaps the window's half-open span."""
    span = window_meta.span_s if isinstance(window_meta, AggWindow) else tuple(window_meta)
    for ann in annotations:
        start_s = ann["start_s"] if isinstance(ann, dict) else ann.start_s
        end_s = ann["end_s"] if isinstance(ann, dict) else ann.end_s
        if _overlaps(span, start_s, end_s):
            return 1
    return 0


register_detector(
    "scripted",
    lambda spec, env: (lambda w: scripted_keyword_detector(w, env.get("annotations", []))),
)


class InterpreterStubNode(Node):
    """Deterministic stand-in for a recognizer: scripted by window index."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        self._by_index: dict[int, list[dict]] = {}
        for entry in env.get("interpreter_script", []):
            self._by_index.setdefault(int(entry["trigger_window_index"]), []).append(entry)

    def input_ports(self):
        return {"in": PortSpec("window")}

    def output_ports(self):
        return {"out": PortSpec("interpretation")}

    def on_packet(self, port, packet, ctx):
        window: AggWindow = packet.payload
        ctx.log("interpreter_window", index=window.index)
        for entry in self._by_index.get(window.index, []):
            interp = Interpretation(
                skill_id=str(entry.get("skill_id", "")),
                entities=dict(entry.get("entities", {})),
                confidence=float(entry.get("confidence", 1.0)),
                timestamp_us=ctx.now_us(),
            )
            ctx.emit("out", interp)


class _CtxClock:
    def __init__(self, ctx):
        self._ctx = ctx

    def now_us(self) -> int:
        return self._ctx.now_us()


class SkillManagerNode(Node):
    """Feeds interpretations through the skill manager and runs the actions.

    Speech (including prompts and abort notices) goes out the ``speech``
    port; low-level skills may emit locomotion commands. Prompt timeouts are
    driven by scheduled timers on the run clock.
    """

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)
        self.config = ManagerConfig(
            confidence_floor=float(params.get("confidence_floor", 0.5)),
            reprompt_limit=int(params.get("reprompt_limit", 2)),
            followup_timeout_s=float(params.get("followup_timeout_s", 10.0)),
        )
        self._env_registry = env.get("skill_registry")
        self.manager: SkillManager | None = None
        self.registry: SkillRegistry | None = None

    def input_ports(self):
        return {"in": PortSpec("interpretation")}

    def output_ports(self):
        return {"speech": PortSpec("text"), "locomotion": PortSpec("locomotion", optional=True)}

    def start(self, ctx):
        clock = _CtxClock(ctx)
        if self._env_registry is not None:
            self.registry = self._env_registry
        else:
            self.registry = SkillRegistry(clock=clock)
            register_demo_skills(self.registry)
        self.registry.bind_clock(clock)
        self.registry.event_listener = lambda event: (
            ctx.collector.skill_failures.append(event.to_json())
            if event.kind == "failed"
            else ctx.collector.skill_invocations.append(event.to_json())
        )
        self.manager = SkillManager(self.registry, self.config, clock=clock)
        self._schedule_store: list = []

    def _facade(self, ctx, level: SkillLevel):
        """High-level skills see only the abstract capabilities; low-level
        skills additionally get the device outputs."""
        common = dict(
            speak_fn=lambda text: ctx.emit("speech", text),
            notify_fn=lambda text: ctx.log("notify", text=text),
            state={"time_us": ctx.now_us()},
            schedule_store=self._schedule_store,
        )
        if level is SkillLevel.LOW_LEVEL:
            return LowLevelContext(
                locomotion_fn=lambda cmd: ctx.emit("locomotion", cmd), **common
            )
        return SkillContext(**common)

    def on_packet(self, port, packet, ctx):
        interp: Interpretation = packet.payload
        session = self.manager.active_session()
        if session is not None:
            action = self.manager.followup(session.session_id, interp)
        else:
            action = self.manager.handle(interp)
        self._run_action(action, ctx)

    def on_timer(self, tag, ctx):
        if not (isinstance(tag, tuple) and len(tag) == 3 and tag[0] == "timeout"):
            return
        _, session_id, reprompts_at_schedule = tag
        session = self.manager.sessions.get(session_id)
        if (
            session is None
            or session.state is not SessionState.FILLING
            or session.reprompts_used != reprompts_at_schedule
        ):
            return
        self._run_action(self.manager.followup(session_id, TIMEOUT), ctx)

    def _run_action(self, action, ctx):
        if isinstance(action, Execute):
            ctx.log("skill_execute", skill=action.skill_id)
            if action.session_id is not None:
                self.manager.mark_executing(action.session_id)
            descriptor, _ = self.registry.lookup(action.skill_id)
            facade = self._facade(ctx, descriptor.level)
            handle = self.registry.dispatch(action.skill_id, action.entities, context=facade)
            try:
                handle.result()
            except Exception:
                pass  # already logged as a SkillFailed event
            if action.session_id is not None:
                self.manager.mark_done(action.session_id)
        elif isinstance(action, Prompt):
            ctx.emit("speech", action.prompt_text)
            session = self.manager.sessions[action.session_id]
            ctx.schedule(
                self.manager.followup_timeout_us,
                tag=("timeout", action.session_id, session.reprompts_used),
            )
        elif isinstance(action, Reject):
            ctx.log("reject", reason=action.reason.value, detail=action.detail)
            if action.reason.value == "session_aborted":
                ctx.emit("speech", action.detail)


class SpeakerSinkNode(Node):
    """Simulated speaker: spoken text becomes a timestamped event log."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)

    def input_ports(self):
        return {"in": PortSpec("text")}

    def on_packet(self, port, packet, ctx):
        ctx.collector.channel("speech").append({"t_us": ctx.now_us(), "text": str(packet.payload)})


class UartSinkNode(Node):
    """Simulated UART: encodes locomotion commands and captures wire bytes."""

    def __init__(self, node_id: str, params: dict, env: dict):
        super().__init__(node_id)

    def input_ports(self):
        return {"in": PortSpec("locomotion")}

    def on_packet(self, port, packet, ctx):
        word = encode_locomotion(packet.payload)
        data = frame_uart(word)
        ctx.collector.uart.extend(data)
        ctx.log("uart_tx", hex=data.hex())


def harness_kind_registry() -> NodeKindRegistry:
    reg = default_kind_registry()
    reg.register("audio_source", AudioSourceNode)
    reg.register("io_manager", IoManagerNode)
    reg.register("resampler_48to16", ResamplerNode)
    reg.register("interpreter_stub", InterpreterStubNode)
    reg.register("skill_manager", SkillManagerNode)
    reg.register("speaker_sink", SpeakerSinkNode)
    reg.register("uart_sink", UartSinkNode)
    return reg
