"""Locomotion wire codec and obstacle-scan geometry."""

from .geometry import (
    BeamMode,
    DomainError,
    GeometryError,
    SPEED_OF_SOUND_MPS,
    beam_components,
    echo_round_trip_s,
    max_sampling_rate,
    tof_distance,
)
from .locomotion import (
    BITS_PER_BYTE_8N1,
    CodecError,
    Direction,
    LocomotionCommand,
    MalformedPacket,
    UART_BAUD,
    UartDeframer,
    decode_locomotion,
    encode_locomotion,
    frame_uart,
    uart_transfer_time_s,
)
from .sweep import (
    EchoClass,
    ScanPoint,
    SweepConfig,
    SweepConfigError,
    SweepSchedule,
    SweepStop,
    scan_points_to_csv,
    scan_to_points,
    sweep_angles,
    sweep_schedule,
)

__all__ = [
    "BITS_PER_BYTE_8N1",
    "BeamMode",
    "CodecError",
    "Direction",
    "DomainError",
    "EchoClass",
    "GeometryError",
    "LocomotionCommand",
    "MalformedPacket",
    "SPEED_OF_SOUND_MPS",
    "ScanPoint",
    "SweepConfig",
    "SweepConfigError",
    "SweepSchedule",
    "SweepStop",
    "UART_BAUD",
    "UartDeframer",
    "decode_locomotion",
    "echo_round_trip_s",
    "encode_locomotion",
    "frame_uart",
    "max_sampling_rate",
    "scan_points_to_csv",
    "scan_to_points",
    "sweep_angles",
    "sweep_schedule",
    "tof_distance",
    "uart_transfer_time_s",
]
