from .series import NO_LABEL, LabeledSignalSet, Segment, SessionSchedule, TimeSeries
from .ops import (
    DEFAULT_MEDIAN_ORDER,
    DEFAULT_TARGET_RATE_HZ,
    DEFAULT_TRIM_S,
    NormalizedSeries,
    align_and_resample,
    label_stream,
    median_filter,
    normalize_session,
    preprocess_session,
)
from .io import (
    read_labeled_csv,
    read_manifest,
    read_recording_csv,
    write_labeled_csv,
    write_manifest,
    write_recording_csv,
)

__all__ = [
    "NO_LABEL",
    "LabeledSignalSet",
    "Segment",
    "SessionSchedule",
    "TimeSeries",
    "NormalizedSeries",
    "align_and_resample",
    "median_filter",
    "normalize_session",
    "label_stream",
    "preprocess_session",
    "DEFAULT_MEDIAN_ORDER",
    "DEFAULT_TARGET_RATE_HZ",
    "DEFAULT_TRIM_S",
    "read_labeled_csv",
    "read_manifest",
    "read_recording_csv",
    "write_labeled_csv",
    "write_manifest",
    "write_recording_csv",
]
