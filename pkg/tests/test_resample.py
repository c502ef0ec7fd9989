"""Resampler contract: rate, length, tone fidelity, alias rejection."""

import numpy as np
import pytest

from flowbot.dsp import AudioBuffer, ResampleError, resample_3to1


def tone(freq_hz, duration_s=1.0, rate=48000, amp=0.5):
    t = np.arange(int(duration_s * rate)) / rate
    return AudioBuffer(samples=amp * np.sin(2 * np.pi * freq_hz * t), sample_rate_hz=rate)


def steady_state(samples, margin=800):
    return samples[margin:-margin]


def measured_gain_db(out_buf, in_amp):
    mid = steady_state(out_buf.samples)
    rms_out = np.sqrt(np.mean(mid**2))
    rms_in = in_amp / np.sqrt(2)
    return 20 * np.log10(rms_out / rms_in)


def test_zeros_pass_through():
    out = resample_3to1(AudioBuffer(samples=np.zeros(48000), sample_rate_hz=48000))
    assert out.sample_rate_hz == 16000
    assert len(out) == 16000
    assert np.all(out.samples == 0)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 10, 48000, 48001, 48002])
def test_output_length_is_floor_n_over_3(n):
    out = resample_3to1(AudioBuffer(samples=np.zeros(n), sample_rate_hz=48000))
    assert len(out) == n // 3


def test_wrong_input_rate_rejected():
    with pytest.raises(ResampleError):
        resample_3to1(AudioBuffer(samples=np.zeros(16000), sample_rate_hz=16000))


def test_1khz_tone_keeps_frequency():
    out = resample_3to1(tone(1000.0))
    # 1 s at 16 kHz: 1 Hz bins, the tone must land within 0.1 %
    spectrum = np.abs(np.fft.rfft(out.samples))
    peak_hz = float(np.argmax(spectrum))  # bin k is exactly k Hz here
    assert abs(peak_hz - 1000.0) <= 1.0


@pytest.mark.parametrize("freq", [100.0, 1000.0, 3000.0, 5000.0, 6500.0, 6900.0])
def test_tones_below_7khz_keep_amplitude_within_1db(freq):
    out = resample_3to1(tone(freq))
    assert abs(measured_gain_db(out, 0.5)) <= 1.0


def test_23khz_tone_attenuated_40db():
    out = resample_3to1(tone(23000.0))
    mid = steady_state(out.samples)
    rms_out = np.sqrt(np.mean(mid**2))
    rms_in = 0.5 / np.sqrt(2)
    assert 20 * np.log10(rms_out / rms_in) <= -40.0


def test_repeated_resampling_is_bit_identical():
    rng = np.random.default_rng(6)
    buf = AudioBuffer(samples=rng.uniform(-1, 1, 9600), sample_rate_hz=48000)
    assert np.array_equal(resample_3to1(buf).samples, resample_3to1(buf).samples)


def test_above_nyquist_energy_rejected_overall():
    # a tone above the output Nyquist must not alias into the output band
    out = resample_3to1(tone(16000.0))
    assert np.sqrt(np.mean(steady_state(out.samples) ** 2)) < 0.5 / np.sqrt(2) / 100.0
