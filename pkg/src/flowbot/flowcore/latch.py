"""Binary gate on a data stream, driven by a bit-valued control stream.

A control bit takes effect for every data packet with a later timestamp; on
an exact timestamp tie the control applies first, so a gate opened "by" a
packet admits that packet.
"""

from __future__ import annotations

from enum import Enum
from typing import Optional

from .packet import Packet


class LatchState(Enum):
    OPEN = "open"
    CLOSED = "closed"


class Latch:
    def __init__(self, initial: LatchState = LatchState.CLOSED):
        self.state = initial
        self.initial = initial
        self.forwarded = 0
        self.suppressed = 0
        self.transitions: list[tuple[int, LatchState]] = []

    def apply_control(self, bit, ts_us: int) -> bool:
        """Set the gate from a control bit. Returns True on a state change."""
        target = LatchState.OPEN if bit else LatchState.CLOSED
        if target is self.state:
            return False
        self.state = target
        self.transitions.append((ts_us, target))
        return True

    def forward(self, packet: Packet) -> Optional[Packet]:
        """Pass the packet through when open; drop and count it when closed."""
        if self.state is LatchState.OPEN:
            self.forwarded += 1
            return packet
        self.suppressed += 1
        return None

    @property
    def openings(self) -> int:
        return sum(1 for _, s in self.transitions if s is LatchState.OPEN)

    def to_json(self) -> dict:
        return {
            "initial": self.initial.value,
            "state": self.state.value,
            "forwarded": self.forwarded,
            "suppressed": self.suppressed,
            "openings": self.openings,
            "transitions": [{"t_us": t, "state": s.value} for t, s in self.transitions],
        }
