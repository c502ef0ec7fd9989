"""Audio buffers, signed 16-bit PCM codec and RIFF/WAV file I/O.

PCM mapping: little-endian int16 ``q`` decodes to ``q / 32768``; encoding
rounds half away from zero and clamps to [-32768, 32767], so
``decode(encode(decode(b))) == decode(b)`` bit-exactly.
"""

from __future__ import annotations

import io
import wave
from dataclasses import dataclass

import numpy as np


class PcmFormatError(ValueError):
    pass


class WavFormatError(ValueError):
    pass


@dataclass(frozen=True)
class AudioBuffer:
    """Mono samples in [-1, 1] at a fixed rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.samples.ndim != 1:
            raise ValueError("AudioBuffer holds mono 1-D samples")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be > 0")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz


def round_half_away(x):
    """Round half away from zero (platform-independent, unlike bankers')."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def pcm16_decode(data: bytes, sample_rate_hz: int = 16000) -> AudioBuffer:
    if len(data) % 2 != 0:
        raise PcmFormatError(f"PCM16 byte stream has odd length {len(data)}")
    ints = np.frombuffer(data, dtype="<i2").astype(np.float64)
    return AudioBuffer(samples=ints / 32768.0, sample_rate_hz=sample_rate_hz)


def pcm16_encode(buffer: AudioBuffer) -> bytes:
    scaled = round_half_away(buffer.samples * 32768.0)
    clamped = np.clip(scaled, -32768, 32767).astype("<i2")
    return clamped.tobytes()


def read_wav(path) -> AudioBuffer:
    """Read a RIFF PCM16 file; stereo input keeps the first channel only.

    Compressed or non-16-bit formats are rejected with WavFormatError.
    """
    try:
        with wave.open(str(path), "rb") as wf:
            nchannels = wf.getnchannels()
            sampwidth = wf.getsampwidth()
            rate = wf.getframerate()
            frames = wf.readframes(wf.getnframes())
    except wave.Error as exc:
        raise WavFormatError(f"not an uncompressed PCM WAV file: {exc}") from exc
    except EOFError as exc:
        raise WavFormatError("truncated WAV file") from exc
    if sampwidth != 2:
        raise WavFormatError(f"expected 16-bit PCM, got {8 * sampwidth}-bit")
    buf = pcm16_decode(frames, sample_rate_hz=rate)
    if nchannels > 1:
        buf = AudioBuffer(samples=buf.samples[::nchannels], sample_rate_hz=rate)
    return buf


def write_wav(path, buffer: AudioBuffer) -> None:
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(buffer.sample_rate_hz)
        wf.writeframes(pcm16_encode(buffer))


def write_wav_bytes(buffer: AudioBuffer) -> bytes:
    bio = io.BytesIO()
    with wave.open(bio, "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(buffer.sample_rate_hz)
        wf.writeframes(pcm16_encode(buffer))
    return bio.getvalue()
