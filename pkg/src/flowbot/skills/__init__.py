"""Skill registry, dispatch and the slot-filling manager."""

from .builtin import (
    CapabilityError,
    LowLevelContext,
    SkillContext,
    demo_descriptors,
    register_demo_skills,
)
from .manager import (
    Action,
    Execute,
    ManagerConfig,
    Prompt,
    Reject,
    RejectReason,
    SkillManager,
    TIMEOUT,
)
from .registry import (
    InvocationHandle,
    SerialSkillExecutor,
    SkillEvent,
    SkillRegistry,
    ThreadedSkillExecutor,
)
from .types import (
    DuplicateSkillError,
    EntitySpec,
    EntityType,
    ExecutionPolicy,
    Interpretation,
    MissingEntitiesError,
    SessionState,
    SkillDescriptor,
    SkillError,
    SkillLevel,
    SkillNotFoundError,
    SkillSession,
    UnknownSessionError,
    descriptor_from_json,
    load_catalog,
)

__all__ = [
    "Action",
    "CapabilityError",
    "DuplicateSkillError",
    "EntitySpec",
    "EntityType",
    "Execute",
    "ExecutionPolicy",
    "Interpretation",
    "InvocationHandle",
    "LowLevelContext",
    "ManagerConfig",
    "MissingEntitiesError",
    "Prompt",
    "Reject",
    "RejectReason",
    "SerialSkillExecutor",
    "SessionState",
    "SkillContext",
    "SkillDescriptor",
    "SkillError",
    "SkillEvent",
    "SkillLevel",
    "SkillManager",
    "SkillNotFoundError",
    "SkillRegistry",
    "SkillSession",
    "ThreadedSkillExecutor",
    "TIMEOUT",
    "UnknownSessionError",
    "demo_descriptors",
    "descriptor_from_json",
    "load_catalog",
    "register_demo_skills",
]
