"""Signal preprocessing: alignment/resampling, median filtering, normalization, labeling.

All functions are pure: they never mutate their inputs and are safe to call
concurrently. Standard deviation is the sample (n-1) definition throughout
the package.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..errors import ConfigError, IngestError, ScheduleError
from ..labels import Channel, EmotionLabel
from .series import NO_LABEL, LabeledSignalSet, SessionSchedule, TimeSeries

#: Uniform reporting rate after resampling.
DEFAULT_TARGET_RATE_HZ = 1.0
#: Smoothing filter order applied to GSR.
DEFAULT_MEDIAN_ORDER = 10
#: Seconds trimmed from the head of each non-rest segment (transition samples).
DEFAULT_TRIM_S = 15.0


def align_and_resample(
    streams: list[TimeSeries], target_rate: float = DEFAULT_TARGET_RATE_HZ
) -> list[TimeSeries]:
    """Resample every stream onto one shared grid referenced to the global clock.

    The grid consists of the multiples of 1/target_rate that fall inside the
    union of the input time ranges, so streams from devices with offset clocks
    land on identical timestamps. Interior gaps are filled by linear
    interpolation; before the first / after the last observed sample the
    nearest observed value is held constant.
    """
    if target_rate <= 0:
        raise ConfigError(f"target_rate must be positive, got {target_rate}")
    if not streams:
        raise IngestError("no streams to resample")

    step_ms = 1000.0 / target_rate
    t_min = min(s.timestamps_ms[0] for s in streams)
    t_max = max(s.timestamps_ms[-1] for s in streams)
    k_first = math.ceil(t_min / step_ms - 1e-9)
    k_last = math.floor(t_max / step_ms + 1e-9)
    if k_last < k_first:
        raise IngestError("input time ranges too short for one grid point")
    grid = np.arange(k_first, k_last + 1, dtype=np.float64) * step_ms

    out = []
    for s in streams:
        vals = np.interp(grid, s.timestamps_ms, s.values)
        out.append(
            TimeSeries(
                channel=s.channel,
                timestamps_ms=grid.copy(),
                values=vals,
                device=s.device,
                sample_rate_hint=target_rate,
            )
        )
    return out


def median_filter(series: TimeSeries, order: int = DEFAULT_MEDIAN_ORDER) -> TimeSeries:
    """Causal median filter: each output is the median of the trailing window.

    The window holds the ``order`` samples ending at the current one and
    shrinks near the start; even-cardinality windows take the mean of the two
    middle values. Length is preserved.
    """
    if order < 1:
        raise ConfigError(f"median filter order must be >= 1, got {order}")
    x = series.values
    n = x.size
    out = np.empty(n, dtype=np.float64)
    head = min(order - 1, n)
    for i in range(head):
        out[i] = np.median(x[: i + 1])
    if n >= order:
        windows = np.lib.stride_tricks.sliding_window_view(x, order)
        out[order - 1 :] = np.median(windows, axis=1)
    return series.with_values(out)


class NormalizedSeries(NamedTuple):
    series: TimeSeries
    degenerate: bool


def normalize_session(series: TimeSeries) -> NormalizedSeries:
    """Z-score one session's samples (mean 0, sample std 1).

    Removes the day/time bias of the session. A series whose sample std falls
    below 1e-12 (or a single-sample series) is returned as all zeros with the
    degenerate flag set.
    """
    x = series.values
    mean = float(np.mean(x))
    std = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
    if not np.isfinite(std) or std < 1e-12:
        return NormalizedSeries(series.with_values(np.zeros_like(x)), True)
    return NormalizedSeries(series.with_values((x - mean) / std), False)


def label_stream(
    grid: list[TimeSeries],
    schedule: SessionSchedule,
    trim_s: float = DEFAULT_TRIM_S,
) -> LabeledSignalSet:
    """Attach schedule labels to resampled streams on a shared grid.

    Every sample inside a segment takes the segment's label and clip_id. The
    first ``trim_s`` seconds of each non-rest segment are marked excluded
    (emotion build-up transition), as are samples outside all segments.
    """
    if trim_s < 0:
        raise ConfigError(f"trim_s must be >= 0, got {trim_s}")
    if not grid:
        raise IngestError("no streams to label")
    ts = grid[0].timestamps_ms
    for s in grid[1:]:
        if s.timestamps_ms.size != ts.size or not np.array_equal(s.timestamps_ms, ts):
            raise IngestError("streams are not on a shared grid; resample first")

    t = ts / 1000.0
    if schedule.segments:
        if schedule.start_s < t[0] - 1e-9 or schedule.end_s > t[-1] + 1.0 + 1e-9:
            raise ScheduleError(
                f"schedule [{schedule.start_s}, {schedule.end_s})s outside grid "
                f"range [{t[0]}, {t[-1]}]s"
            )

    n = ts.size
    labels = np.full(n, NO_LABEL, dtype=np.int8)
    excluded = np.ones(n, dtype=bool)
    clip_ids: list[str | None] = [None] * n

    for seg in schedule.segments:
        in_seg = (t >= seg.start_s) & (t < seg.end_s)
        if np.any(labels[in_seg] != NO_LABEL):
            raise ScheduleError(f"segment at {seg.start_s}s overlaps a labeled sample")
        labels[in_seg] = int(seg.label)
        keep = in_seg.copy()
        if seg.label != EmotionLabel.REST and trim_s > 0:
            keep &= t >= seg.start_s + trim_s
        excluded[keep] = False
        if seg.clip_id is not None:
            for i in np.nonzero(in_seg)[0]:
                clip_ids[i] = seg.clip_id

    channels = {s.channel: s.values.copy() for s in grid}
    return LabeledSignalSet(
        session_id=schedule.session_id,
        timestamps_ms=ts.copy(),
        channels=channels,
        labels=labels,
        excluded=excluded,
        clip_ids=clip_ids,
    )


def preprocess_session(
    streams: list[TimeSeries],
    schedule: SessionSchedule,
    target_rate: float = DEFAULT_TARGET_RATE_HZ,
    median_order: int = DEFAULT_MEDIAN_ORDER,
    median_channels: tuple[Channel, ...] = (Channel.GSR,),
    trim_s: float = DEFAULT_TRIM_S,
) -> LabeledSignalSet:
    """Full per-session preprocessing: resample, smooth, normalize, label."""
    aligned = align_and_resample(streams, target_rate)
    processed = []
    for s in aligned:
        if s.channel in median_channels:
            s = median_filter(s, median_order)
        processed.append(normalize_session(s).series)
    return label_stream(processed, schedule, trim_s)
