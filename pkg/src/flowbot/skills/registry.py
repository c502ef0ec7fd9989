"""Skill registry: exact-match string keys to handlers, with dispatch.

Dispatch honors the descriptor's execution policy: Inline runs the handler
to completion on the calling thread; Deferred schedules it on the skill
executor and the handle resolves later. Exactly one SkillInvoked event is
logged per dispatch either way; handler failures log SkillFailed.
"""

from __future__ import annotations

import threading
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .types import (
    DuplicateSkillError,
    ExecutionPolicy,
    MissingEntitiesError,
    SkillDescriptor,
    SkillNotFoundError,
)


@dataclass(frozen=True)
class SkillEvent:
    kind: str  # "invoked" | "failed"
    skill_id: str
    entities: dict
    policy: str
    t_us: int = 0
    error: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "skill_id": self.skill_id,
            "entities": dict(self.entities),
            "policy": self.policy,
            "t_us": self.t_us,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


class InvocationHandle:
    """Resolves to the handler's return value; raises its exception."""

    def done(self) -> bool:
        raise NotImplementedError

    def result(self, timeout: Optional[float] = None) -> Any:
        raise NotImplementedError


class _ImmediateHandle(InvocationHandle):
    def __init__(self, value: Any = None, error: Optional[BaseException] = None):
        self._value = value
        self._error = error

    def done(self) -> bool:
        return True

    def result(self, timeout: Optional[float] = None) -> Any:
        if self._error is not None:
            raise self._error
        return self._value


class _FutureHandle(InvocationHandle):
    def __init__(self, future: Future):
        self._future = future

    def done(self) -> bool:
        return self._future.done()

    def result(self, timeout: Optional[float] = None) -> Any:
        return self._future.result(timeout)


class SerialSkillExecutor:
    """Runs deferred handlers immediately on the caller; deterministic."""

    def submit(self, fn: Callable, *args) -> InvocationHandle:
        try:
            return _ImmediateHandle(value=fn(*args))
        except BaseException as exc:
            return _ImmediateHandle(error=exc)


class ThreadedSkillExecutor:
    """Runs deferred handlers on a dedicated worker pool."""

    def __init__(self, max_workers: int = 1):
        self._pool = ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="skill")

    def submit(self, fn: Callable, *args) -> InvocationHandle:
        return _FutureHandle(self._pool.submit(fn, *args))

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True)


class SkillRegistry:
    """Hash map of skill id -> (descriptor, handler). Lookup is exact-match.

    Registration happens during construction/wiring; lookup and dispatch are
    safe to call concurrently afterwards.
    """

    def __init__(self, executor=None, clock=None):
        self._entries: dict[str, tuple[SkillDescriptor, Callable]] = {}
        self._executor = executor if executor is not None else SerialSkillExecutor()
        self._clock = clock
        self._lock = threading.Lock()
        self.events: list[SkillEvent] = []
        self.event_listener: Optional[Callable[[SkillEvent], None]] = None

    def _now_us(self) -> int:
        return self._clock.now_us() if self._clock is not None else 0

    def bind_clock(self, clock) -> None:
        """Late-bind the time source used to stamp events (e.g. a run clock)."""
        self._clock = clock

    def register(self, descriptor: SkillDescriptor, handler: Callable) -> None:
        if descriptor.id in self._entries:
            raise DuplicateSkillError(f"skill already registered: {descriptor.id!r}")
        self._entries[descriptor.id] = (descriptor, handler)

    def __contains__(self, skill_id: str) -> bool:
        return skill_id in self._entries

    def lookup(self, skill_id: str) -> tuple[SkillDescriptor, Callable]:
        try:
            return self._entries[skill_id]
        except KeyError:
            raise SkillNotFoundError(f"no skill registered under {skill_id!r}") from None

    def descriptors(self) -> list[SkillDescriptor]:
        return [d for d, _ in self._entries.values()]

    def _log(self, event: SkillEvent) -> None:
        with self._lock:
            self.events.append(event)
        if self.event_listener is not None:
            self.event_listener(event)

    def dispatch(self, skill_id: str, entities: dict, context=None, executor=None) -> InvocationHandle:
        descriptor, handler = self.lookup(skill_id)
        missing = descriptor.missing_from(entities)
        if missing:
            raise MissingEntitiesError(skill_id, missing)
        policy = descriptor.execution_policy
        self._log(
            SkillEvent(
                kind="invoked",
                skill_id=skill_id,
                entities=dict(entities),
                policy=policy.value,
                t_us=self._now_us(),
            )
        )

        def run():
            try:
                return handler(dict(entities), context)
            except BaseException as exc:
                self._log(
                    SkillEvent(
                        kind="failed",
                        skill_id=skill_id,
                        entities=dict(entities),
                        policy=policy.value,
                        t_us=self._now_us(),
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
                raise

        if policy is ExecutionPolicy.INLINE:
            try:
                return _ImmediateHandle(value=run())
            except BaseException as exc:
                return _ImmediateHandle(error=exc)
        chosen = executor if executor is not None else self._executor
        return chosen.submit(run)
