import numpy as np
import pytest

from emobaseline.errors import ConfigError, IngestError, ScheduleError
from emobaseline.labels import Channel, EmotionLabel
from emobaseline.signal import (
    Segment,
    SessionSchedule,
    TimeSeries,
    align_and_resample,
    label_stream,
    median_filter,
    normalize_session,
)
from conftest import make_grid
from oracles import naive_median_filter


def ts(t, v, channel=Channel.HR):
    return TimeSeries(channel=channel, timestamps_ms=np.asarray(t, float), values=np.asarray(v, float))


class TestTimeSeries:
    def test_rejects_empty(self):
        with pytest.raises(IngestError):
            ts([], [])

    def test_rejects_non_monotone(self):
        with pytest.raises(IngestError):
            ts([0, 2000, 1000], [1, 2, 3])

    def test_rejects_non_finite(self):
        with pytest.raises(IngestError):
            ts([0, 1000], [1.0, np.nan])


class TestAlignAndResample:
    def test_linear_interpolation_midpoint(self):
        out = align_and_resample([ts([0, 2000, 4000], [1, 3, 5])], 1.0)[0]
        assert out.values[1] == pytest.approx(2.0)
        assert list(out.timestamps_ms) == [0, 1000, 2000, 3000, 4000]

    def test_constant_extrapolation_at_edges(self):
        a = ts([0, 10_000], [1.0, 7.0])
        b = ts([0, 12_000], [0.0, 0.0], channel=Channel.GSR)
        out = align_and_resample([a, b], 1.0)
        vals = out[0].values
        assert vals[11] == 7.0 and vals[12] == 7.0  # held past t=10s

    def test_offset_streams_share_identical_grid(self):
        a = ts([0, 60_000], [0, 1])
        b = ts([500, 60_500], [0, 1], channel=Channel.GSR)
        out = align_and_resample([a, b], 1.0)
        assert np.array_equal(out[0].timestamps_ms, out[1].timestamps_ms)
        assert out[0].timestamps_ms[0] == 0.0  # integer-second grid
        assert out[1].timestamps_ms[-1] == 60_000.0

    def test_identity_on_gridded_input(self):
        t = np.arange(50) * 1000.0
        v = np.random.default_rng(0).normal(size=50)
        out = align_and_resample([ts(t, v)], 1.0)[0]
        assert np.array_equal(out.values, v)
        assert np.array_equal(out.timestamps_ms, t)

    def test_deterministic_bit_identical(self):
        rng = np.random.default_rng(3)
        t = np.cumsum(rng.integers(200, 1800, size=200)).astype(float)
        v = rng.normal(size=200)
        out1 = align_and_resample([ts(t, v)], 1.0)[0]
        out2 = align_and_resample([ts(t.copy(), v.copy())], 1.0)[0]
        assert np.array_equal(out1.values, out2.values)

    def test_bad_rate_rejected(self):
        with pytest.raises(ConfigError):
            align_and_resample([ts([0, 1000], [0, 1])], 0.0)


class TestMedianFilter:
    def test_constant_series_unchanged(self):
        s = ts(np.arange(20) * 1000.0, np.full(20, 3.25))
        assert np.array_equal(median_filter(s, 10).values, s.values)

    def test_spike_removed(self):
        v = [0, 0, 0, 0, 0, 100, 0, 0, 0, 0, 0, 0]
        s = ts(np.arange(12) * 1000.0, v)
        out = median_filter(s, 10)
        assert out.values[5] == 0.0
        assert np.array_equal(out.values, naive_median_filter(v, 10))

    def test_even_window_uses_middle_mean(self):
        s = ts([0, 1000], [1.0, 3.0])
        assert median_filter(s, 2).values[1] == 2.0

    def test_order_zero_rejected(self):
        with pytest.raises(ConfigError):
            median_filter(ts([0], [1.0]), 0)

    def test_matches_brute_force_oracle_exactly(self):
        rng = np.random.default_rng(42)
        for trial in range(1000):
            n = int(rng.integers(1, 40))
            order = int(rng.integers(1, 12))
            v = rng.normal(size=n)
            s = ts(np.arange(n) * 1000.0, v)
            expected = naive_median_filter(v.tolist(), order)
            assert np.array_equal(median_filter(s, order).values, expected), (
                f"mismatch at trial {trial} (n={n}, order={order})"
            )


class TestNormalizeSession:
    def test_zero_mean_unit_sample_std(self):
        out, degenerate = normalize_session(ts([0, 1000, 2000], [2.0, 4.0, 6.0]))
        assert not degenerate
        assert np.mean(out.values) == pytest.approx(0.0, abs=1e-12)
        assert np.std(out.values, ddof=1) == pytest.approx(1.0, abs=1e-12)

    def test_constant_input_degenerate(self):
        out, degenerate = normalize_session(ts([0, 1000, 2000], [5.0, 5.0, 5.0]))
        assert degenerate
        assert np.array_equal(out.values, np.zeros(3))

    def test_idempotent(self):
        rng = np.random.default_rng(7)
        v = rng.normal(3.0, 2.5, size=400)
        once, _ = normalize_session(ts(np.arange(400) * 1000.0, v))
        twice, _ = normalize_session(once)
        assert np.allclose(once.values, twice.values, atol=1e-9)


class TestLabelStream:
    def schedule(self, trimable=True):
        return SessionSchedule(
            session_id="s1",
            segments=(
                Segment(0, 300, EmotionLabel.REST),
                Segment(300, 600, EmotionLabel.FEAR, clip_id="c1"),
            ),
        )

    def test_trim_excludes_segment_head(self):
        grid = make_grid(600, constant=1.0)
        labeled = label_stream(grid, self.schedule(), trim_s=10)
        t = labeled.t_seconds
        fear = labeled.labels == int(EmotionLabel.FEAR)
        assert np.all(labeled.excluded[(t >= 300) & (t < 310)])
        kept = fear & ~labeled.excluded
        assert np.all(t[kept] >= 310)
        assert kept.sum() == 290

    def test_trim_zero_keeps_everything(self):
        grid = make_grid(600, constant=1.0)
        labeled = label_stream(grid, self.schedule(), trim_s=0)
        fear = labeled.labels == int(EmotionLabel.FEAR)
        assert (~labeled.excluded[fear]).sum() == 300

    def test_samples_outside_segments_excluded(self):
        grid = make_grid(700, constant=1.0)
        labeled = label_stream(grid, self.schedule(), trim_s=0)
        outside = labeled.t_seconds >= 600
        assert np.all(labeled.excluded[outside])

    def test_kept_count_is_length_minus_trim(self):
        grid = make_grid(2000, seed=1)
        segments = []
        t0 = 0
        for k, emotion in enumerate(
            [EmotionLabel.FEAR, EmotionLabel.DISGUST, EmotionLabel.CONTENT]
        ):
            segments.append(Segment(t0, t0 + 400 + 50 * k, emotion, clip_id=f"c{k}"))
            t0 += 400 + 50 * k
        labeled = label_stream(
            grid, SessionSchedule(session_id="s", segments=tuple(segments)), trim_s=15
        )
        for seg in segments:
            mask = (
                (labeled.labels == int(seg.label))
                & ~labeled.excluded
                & (labeled.t_seconds >= seg.start_s)
                & (labeled.t_seconds < seg.end_s)
            )
            assert mask.sum() == seg.duration_s - 15

    def test_clip_ids_attached(self):
        grid = make_grid(600, constant=1.0)
        labeled = label_stream(grid, self.schedule(), trim_s=0)
        assert labeled.clip_ids[350] == "c1"
        assert labeled.clip_ids[100] is None

    def test_overlap_rejected(self):
        with pytest.raises(ScheduleError):
            SessionSchedule(
                session_id="bad",
                segments=(
                    Segment(0, 300, EmotionLabel.REST),
                    Segment(200, 500, EmotionLabel.FEAR, clip_id="c"),
                ),
            )

    def test_schedule_outside_grid_rejected(self):
        grid = make_grid(100, constant=1.0)
        with pytest.raises(ScheduleError):
            label_stream(grid, self.schedule(), trim_s=0)

    def test_non_rest_segment_requires_clip(self):
        with pytest.raises(ScheduleError):
            Segment(0, 10, EmotionLabel.FEAR)
