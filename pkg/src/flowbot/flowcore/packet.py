"""The unit of data exchanged between graph nodes."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any


@dataclass(frozen=True)
class Packet:
    """Immutable, timestamped, sequence-numbered payload carrier.

    ``seq`` is assigned by the producing side and increases strictly along a
    single stream. The payload is treated as immutable once emitted; holders
    must not mutate it, which makes packets safe to copy and to hand across
    execution contexts.
    """

    payload: Any
    timestamp_us: int
    seq: int

    def copy(self) -> "Packet":
        """Return a packet observationally identical to this one."""
        return replace(self)
