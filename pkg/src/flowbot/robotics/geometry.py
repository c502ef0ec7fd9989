"""Time-of-flight ranging and sensor-sweep component geometry.

Distance from a round-trip echo time is d = c * T / 2, so capping the
detectable distance at d_max bounds the echo wait and yields a maximum
sampling rate of c / (2 * d_max) — 69.2 Hz for 2.5 m in air at 346 m/s.

Component splitting ships in two modes, named after the CLI vocabulary:
"paper" computes d_y = d * tan(theta), d_x = d * cos(theta) (the rig's
as-specified relation, divergent at 90 degrees); "trig" uses
d_y = d * sin(theta) so that d_x^2 + d_y^2 = d^2.
"""

from __future__ import annotations

import math
from enum import Enum

SPEED_OF_SOUND_MPS = 346.0


class GeometryError(ValueError):
    pass


class DomainError(GeometryError):
    pass


class BeamMode(Enum):
    PAPER = "paper"  # tan-based vertical component
    TRIG = "trig"  # sin-based, self-consistent components


def tof_distance(t_s: float, c_mps: float = SPEED_OF_SOUND_MPS) -> float:
    """Ideal one-way obstacle distance from a round-trip time."""
    if t_s < 0:
        raise GeometryError(f"negative time of flight {t_s}")
    if c_mps <= 0:
        raise GeometryError("speed of sound must be > 0")
    return c_mps * t_s / 2.0


def echo_round_trip_s(d_m: float, c_mps: float = SPEED_OF_SOUND_MPS) -> float:
    """Round-trip echo time for a given distance (inverse of tof_distance)."""
    if d_m < 0 or c_mps <= 0:
        raise GeometryError("need d >= 0 and c > 0")
    return 2.0 * d_m / c_mps


def max_sampling_rate(d_max_m: float, c_mps: float = SPEED_OF_SOUND_MPS) -> float:
    """Highest echo rate when waiting out a full round trip at d_max."""
    if d_max_m <= 0 or c_mps <= 0:
        raise GeometryError("need d_max > 0 and c > 0")
    return c_mps / (2.0 * d_max_m)


def beam_components(
    d_ideal_m: float, theta_deg: float, mode: BeamMode = BeamMode.PAPER
) -> tuple[float, float]:
    """Split a ranged distance into (d_x, d_y) components at inclination theta."""
    if d_ideal_m < 0:
        raise GeometryError("d_ideal must be >= 0")
    if not (0.0 <= theta_deg <= 120.0):
        raise GeometryError(f"theta {theta_deg} outside [0, 120] degrees")
    theta = math.radians(theta_deg)
    d_x = d_ideal_m * math.cos(theta)
    if mode is BeamMode.PAPER:
        if theta_deg == 90.0:
            raise DomainError("tan(theta) diverges at 90 degrees in 'paper' mode")
        d_y = d_ideal_m * math.tan(theta)
    else:
        d_y = d_ideal_m * math.sin(theta)
    return d_x, d_y
