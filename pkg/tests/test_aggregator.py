"""Window slicing: counts, offsets, and chunking-invariance."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flowbot.flowcore import Aggregator, AggregatorConfig, AggregatorConfigError


def oracle_window_starts(n, window, hop):
    """Independent enumeration of emitted window offsets."""
    return [o for o in range(0, max(n - window, 0) + 1, hop) if o + window <= n]


CFG_1S_250MS = AggregatorConfig(window_samples=16000, hop_samples=4000, sample_rate_hz=16000)


def test_config_validation():
    with pytest.raises(AggregatorConfigError):
        AggregatorConfig(window_samples=10, hop_samples=0, sample_rate_hz=1)
    with pytest.raises(AggregatorConfigError):
        AggregatorConfig(window_samples=10, hop_samples=11, sample_rate_hz=1)


def test_one_second_window_offsets():
    agg = Aggregator(CFG_1S_250MS)
    windows = agg.feed(np.zeros(28000))
    assert [w.start_sample for w in windows] == [0, 4000, 8000, 12000]
    assert len(windows) == (28000 - 16000) // 4000 + 1


def test_incomplete_window_emits_nothing():
    agg = Aggregator(CFG_1S_250MS)
    assert agg.feed(np.zeros(15999)) == []
    assert agg.pending() == 15999


def test_incremental_feed_matches_batch():
    a = Aggregator(CFG_1S_250MS)
    first = a.feed(np.zeros(16000))
    second = a.feed(np.zeros(4000))
    assert len(first) == 1 and len(second) == 1
    assert second[0].start_sample == 4000


def test_window_contents_and_span():
    cfg = AggregatorConfig(window_samples=6, hop_samples=2, sample_rate_hz=10)
    agg = Aggregator(cfg)
    windows = agg.feed(np.arange(10, dtype=float))
    assert [w.start_sample for w in windows] == [0, 2, 4]
    np.testing.assert_array_equal(windows[1].samples, np.arange(2, 8, dtype=float))
    assert windows[0].span_s == (0.0, 0.6)
    assert windows[2].index == 2


def test_sample_rate_mismatch_is_config_error():
    agg = Aggregator(CFG_1S_250MS)
    with pytest.raises(AggregatorConfigError):
        agg.feed(np.zeros(100), sample_rate_hz=48000)


@given(
    window=st.integers(1, 40),
    hop_frac=st.integers(1, 40),
    chunks=st.lists(st.integers(0, 90), min_size=1, max_size=12),
)
def test_chunked_feeding_equals_batch(window, hop_frac, chunks):
    hop = min(hop_frac, window)
    cfg = AggregatorConfig(window_samples=window, hop_samples=hop, sample_rate_hz=100)
    total = int(sum(chunks))
    samples = np.arange(total, dtype=float)

    batch = Aggregator(cfg).feed(samples)

    incremental = []
    agg = Aggregator(cfg)
    offset = 0
    for size in chunks:
        incremental.extend(agg.feed(samples[offset : offset + size]))
        offset += size

    assert [w.start_sample for w in incremental] == [w.start_sample for w in batch]
    assert [w.start_sample for w in batch] == oracle_window_starts(total, window, hop)
    for a, b in zip(incremental, batch):
        np.testing.assert_array_equal(a.samples, b.samples)
