"""Dataflow core: packets, policy streams, monitors, gates and the executor."""

from .aggregator import (
    Aggregator,
    AggregatorConfig,
    AggregatorConfigError,
    AggWindow,
    SampleChunk,
)
from .attention import attention_decide
from .clock import MonotonicClock, VirtualClock
from .graphdef import GraphDef, LatchDef, NodeDef, SchemaError, StreamDef, graph_from_json
from .latch import Latch, LatchState
from .node import Node, NodeKindRegistry, PortSpec
from .packet import Packet
from .runtime import (
    GraphRunner,
    GraphValidationError,
    RunReport,
    StopCondition,
    default_kind_registry,
    graph_run,
    register_detector,
)
from .stream import (
    LosslessPolicy,
    LossyPolicy,
    PushOutcome,
    PushStatus,
    Stream,
    StreamConfigError,
    StreamPolicy,
    policy_from_json,
    policy_to_json,
)
from .validation import Diagnostic, validate_graph
from .watchdog import Violation, ViolationKind, Watchdog, WatchdogConfig, WatchdogConfigError

__all__ = [
    "Aggregator",
    "AggregatorConfig",
    "AggregatorConfigError",
    "AggWindow",
    "Diagnostic",
    "GraphDef",
    "GraphRunner",
    "GraphValidationError",
    "Latch",
    "LatchDef",
    "LatchState",
    "LosslessPolicy",
    "LossyPolicy",
    "MonotonicClock",
    "Node",
    "NodeDef",
    "NodeKindRegistry",
    "Packet",
    "PortSpec",
    "PushOutcome",
    "PushStatus",
    "RunReport",
    "SampleChunk",
    "SchemaError",
    "StopCondition",
    "Stream",
    "StreamConfigError",
    "StreamDef",
    "StreamPolicy",
    "Violation",
    "ViolationKind",
    "VirtualClock",
    "Watchdog",
    "WatchdogConfig",
    "WatchdogConfigError",
    "attention_decide",
    "default_kind_registry",
    "graph_from_json",
    "graph_run",
    "policy_from_json",
    "policy_to_json",
    "register_detector",
    "validate_graph",
]
