"""Skill descriptors, interpretations and slot-filling sessions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum


class SkillError(Exception):
    pass


class DuplicateSkillError(SkillError):
    pass


class SkillNotFoundError(SkillError):
    pass


class MissingEntitiesError(SkillError):
    def __init__(self, skill_id: str, missing: list[str]):
        self.skill_id = skill_id
        self.missing = list(missing)
        super().__init__(f"skill {skill_id!r} missing entities: {missing}")


class UnknownSessionError(SkillError):
    pass


class EntityType(Enum):
    TEXT = "text"
    NUMBER = "number"
    DURATION = "duration"
    OBJECT_LABEL = "object_label"
    PERSON_NAME = "person_name"


@dataclass(frozen=True)
class EntitySpec:
    name: str
    type: EntityType = EntityType.TEXT


class ExecutionPolicy(Enum):
    INLINE = "inline"
    DEFERRED = "deferred"


class SkillLevel(Enum):
    HIGH_LEVEL = "high"
    LOW_LEVEL = "low"


@dataclass(frozen=True)
class SkillDescriptor:
    """What a skill needs before it can run and how it executes.

    High-level skills see only the abstract capability facade; low-level
    skills additionally get device outputs (e.g. the locomotion stream).
    """

    id: str
    required_entities: tuple[EntitySpec, ...] = ()
    optional_entities: tuple[EntitySpec, ...] = ()
    execution_policy: ExecutionPolicy = ExecutionPolicy.INLINE
    level: SkillLevel = SkillLevel.HIGH_LEVEL

    def __post_init__(self):
        if not self.id:
            raise SkillError("skill id must be nonempty")
        object.__setattr__(self, "required_entities", tuple(self.required_entities))
        object.__setattr__(self, "optional_entities", tuple(self.optional_entities))
        req = [e.name for e in self.required_entities]
        opt = [e.name for e in self.optional_entities]
        if len(set(req)) != len(req) or len(set(opt)) != len(opt):
            raise SkillError(f"skill {self.id!r} declares a duplicate entity name")
        clash = set(req) & set(opt)
        if clash:
            raise SkillError(f"skill {self.id!r}: entities both required and optional: {sorted(clash)}")

    @property
    def declared_entity_names(self) -> set[str]:
        return {e.name for e in self.required_entities} | {e.name for e in self.optional_entities}

    def missing_from(self, entities: dict) -> list[str]:
        return [e.name for e in self.required_entities if e.name not in entities]


@dataclass(frozen=True)
class Interpretation:
    """A recognized command: skill id, entity values and the recognizer's
    confidence. An empty skill_id marks a bare entity answer to a prompt."""

    skill_id: str
    entities: dict = field(default_factory=dict)
    confidence: float = 1.0
    timestamp_us: int = 0

    def __post_init__(self):
        if not (0.0 <= self.confidence <= 1.0):
            raise SkillError(f"confidence {self.confidence} outside [0, 1]")


class SessionState(Enum):
    FILLING = "filling"
    READY = "ready"
    EXECUTING = "executing"
    DONE = "done"
    ABORTED = "aborted"


@dataclass
class SkillSession:
    session_id: str
    descriptor: SkillDescriptor
    filled: dict = field(default_factory=dict)
    missing: list[str] = field(default_factory=list)
    reprompts_used: int = 0
    state: SessionState = SessionState.FILLING
    opened_at_us: int = 0
    last_activity_us: int = 0


def descriptor_from_json(doc: dict) -> SkillDescriptor:
    def entities(key: str) -> tuple[EntitySpec, ...]:
        return tuple(
            EntitySpec(name=str(e["name"]), type=EntityType(str(e.get("type", "text"))))
            for e in doc.get(key, [])
        )

    return SkillDescriptor(
        id=str(doc["id"]),
        required_entities=entities("required_entities"),
        optional_entities=entities("optional_entities"),
        execution_policy=ExecutionPolicy(str(doc.get("execution_policy", "inline"))),
        level=SkillLevel(str(doc.get("level", "high"))),
    )


def load_catalog(path) -> list[SkillDescriptor]:
    """Load skill descriptors from a JSON document (a list of objects)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, list):
        raise SkillError("skill catalog must be a JSON list")
    return [descriptor_from_json(entry) for entry in doc]
