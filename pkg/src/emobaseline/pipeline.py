"""End-to-end orchestration: recordings on disk -> labeled signals -> dataset."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import IngestError
from .features.dataset import Dataset, build_dataset
from .features.extract import DEFAULT_FEATURE_MASK
from .features.windows import WindowConfig, cut_windows_all
from .labels import Channel
from .signal.io import read_manifest, read_recording_csv
from .signal.ops import (
    DEFAULT_MEDIAN_ORDER,
    DEFAULT_TARGET_RATE_HZ,
    DEFAULT_TRIM_S,
    preprocess_session,
)
from .signal.series import LabeledSignalSet


@dataclass(frozen=True)
class IngestParams:
    target_rate: float = DEFAULT_TARGET_RATE_HZ
    median_order: int = DEFAULT_MEDIAN_ORDER
    median_channels: tuple[Channel, ...] = (Channel.GSR,)
    trim_s: float = DEFAULT_TRIM_S


def ingest_session_dir(
    session_dir: str | Path, params: IngestParams = IngestParams()
) -> LabeledSignalSet:
    """Read one session directory (device CSVs + manifest.json) and preprocess."""
    session_dir = Path(session_dir)
    manifest = session_dir / "manifest.json"
    if not manifest.exists():
        raise IngestError(f"{session_dir}: no manifest.json")
    schedule = read_manifest(manifest)
    streams = []
    for csv_path in sorted(session_dir.glob("*.csv")):
        streams.extend(read_recording_csv(csv_path, device=csv_path.stem))
    if not streams:
        raise IngestError(f"{session_dir}: no recording CSVs")
    return preprocess_session(
        streams,
        schedule,
        target_rate=params.target_rate,
        median_order=params.median_order,
        median_channels=params.median_channels,
        trim_s=params.trim_s,
    )


def ingest_recordings_root(
    root: str | Path, params: IngestParams = IngestParams()
) -> list[LabeledSignalSet]:
    """Ingest every session directory under root (those holding a manifest)."""
    root = Path(root)
    session_dirs = sorted(p.parent for p in root.glob("*/manifest.json"))
    if (root / "manifest.json").exists():
        session_dirs.insert(0, root)
    if not session_dirs:
        raise IngestError(f"{root}: no session directories with manifest.json")
    return [ingest_session_dir(d, params) for d in session_dirs]


def dataset_from_signals(
    signal_sets: list[LabeledSignalSet],
    w: int = 32,
    mask: tuple[str, ...] = DEFAULT_FEATURE_MASK,
    min_rank: int | None = None,
    rankings=None,
) -> Dataset:
    windows = cut_windows_all(signal_sets, WindowConfig(w=w))
    return build_dataset(windows, mask=mask, min_rank=min_rank, rankings=rankings)
