"""Time-series containers for per-device channel streams and labeled grids."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import IngestError, ScheduleError
from ..labels import Channel, EmotionLabel

#: Sample label value for grid points outside every schedule segment.
NO_LABEL = -1


@dataclass(frozen=True)
class TimeSeries:
    """One channel's samples from one device, timestamps in ms since the global epoch."""

    channel: Channel
    timestamps_ms: np.ndarray
    values: np.ndarray
    device: str = ""
    sample_rate_hint: float | None = None

    def __post_init__(self):
        t = np.asarray(self.timestamps_ms, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "timestamps_ms", t)
        object.__setattr__(self, "values", v)
        if t.size == 0:
            raise IngestError(f"empty stream for channel {self.channel.value}")
        if t.shape != v.shape or t.ndim != 1:
            raise IngestError("timestamps and values must be 1-D and equally long")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(v)):
            raise IngestError(f"non-finite samples in channel {self.channel.value}")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise IngestError(
                f"timestamps not strictly increasing in channel {self.channel.value}"
            )

    def __len__(self) -> int:
        return int(self.timestamps_ms.size)

    @property
    def t_seconds(self) -> np.ndarray:
        return self.timestamps_ms / 1000.0

    def with_values(self, values: np.ndarray) -> "TimeSeries":
        return TimeSeries(
            channel=self.channel,
            timestamps_ms=self.timestamps_ms,
            values=np.asarray(values, dtype=np.float64),
            device=self.device,
            sample_rate_hint=self.sample_rate_hint,
        )


@dataclass(frozen=True)
class Segment:
    """One scheduled block: [start_s, end_s) carrying a label and, for non-rest, a clip."""

    start_s: float
    end_s: float
    label: EmotionLabel
    clip_id: str | None = None

    def __post_init__(self):
        if self.end_s <= self.start_s:
            raise ScheduleError(f"segment end {self.end_s} <= start {self.start_s}")
        if self.label != EmotionLabel.REST and not self.clip_id:
            raise ScheduleError(
                f"non-rest segment at {self.start_s}s has no clip_id"
            )

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


@dataclass(frozen=True)
class SessionSchedule:
    """Ordered, non-overlapping segments of one recording session."""

    session_id: str
    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        for prev, cur in zip(segs, segs[1:]):
            if cur.start_s < prev.start_s:
                raise ScheduleError("segments out of order")
            if cur.start_s < prev.end_s:
                raise ScheduleError(
                    f"segments overlap at {cur.start_s}s in session {self.session_id}"
                )

    @property
    def start_s(self) -> float:
        return self.segments[0].start_s if self.segments else 0.0

    @property
    def end_s(self) -> float:
        return self.segments[-1].end_s if self.segments else 0.0


@dataclass
class LabeledSignalSet:
    """All six channels on one shared uniform grid with per-sample labels.

    ``labels`` holds EmotionLabel codes (NO_LABEL outside segments);
    ``excluded`` marks samples dropped from windowing (transition trims and
    out-of-segment samples); ``clip_ids`` carries per-sample provenance.
    """

    session_id: str
    timestamps_ms: np.ndarray
    channels: dict[Channel, np.ndarray]
    labels: np.ndarray
    excluded: np.ndarray
    clip_ids: list[str | None] = field(default_factory=list)

    def __post_init__(self):
        n = self.timestamps_ms.size
        for ch, vals in self.channels.items():
            if vals.size != n:
                raise IngestError(f"channel {ch.value} not on the shared grid")
        if self.labels.size != n or self.excluded.size != n:
            raise IngestError("label/exclusion arrays must match the grid length")
        if not self.clip_ids:
            self.clip_ids = [None] * n

    def __len__(self) -> int:
        return int(self.timestamps_ms.size)

    @property
    def t_seconds(self) -> np.ndarray:
        return self.timestamps_ms / 1000.0
