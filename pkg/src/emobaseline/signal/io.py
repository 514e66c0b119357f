"""File formats for raw recordings, session manifests, and labeled signals.

Raw recording CSV (one file per device): header ``timestamp_ms,channel,value``
with integer-millisecond timestamps relative to the global epoch declared in
the session manifest. Manifest: JSON with session_id, epoch, and the segment
list (start_s, end_s, label code 0-6, clip_id).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..errors import IngestError, ScheduleError
from ..labels import Channel, EmotionLabel
from .series import NO_LABEL, LabeledSignalSet, Segment, SessionSchedule, TimeSeries

RECORDING_HEADER = ["timestamp_ms", "channel", "value"]
MANIFEST_VERSION = 1


def write_recording_csv(path: str | Path, streams: list[TimeSeries]) -> None:
    """Write one device's streams as interleaved rows sorted by timestamp."""
    rows = []
    for s in streams:
        for t, v in zip(s.timestamps_ms, s.values):
            rows.append((int(round(t)), s.channel.value, v))
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RECORDING_HEADER)
        for t, ch, v in rows:
            w.writerow([t, ch, repr(float(v))])


def read_recording_csv(path: str | Path, device: str = "") -> list[TimeSeries]:
    """Read one device CSV into per-channel TimeSeries."""
    per_channel: dict[str, tuple[list[float], list[float]]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != RECORDING_HEADER:
            raise IngestError(f"{path}: expected header {','.join(RECORDING_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t, ch, v = int(row[0]), row[1], float(row[2])
            except (ValueError, IndexError) as exc:
                raise IngestError(f"{path}:{lineno}: bad row {row!r}") from exc
            per_channel.setdefault(ch, ([], []))[0].append(t)
            per_channel[ch][1].append(v)

    out = []
    device_name = device or Path(path).stem
    for ch_name, (ts, vs) in per_channel.items():
        try:
            channel = Channel(ch_name)
        except ValueError as exc:
            raise IngestError(f"{path}: unknown channel {ch_name!r}") from exc
        out.append(
            TimeSeries(
                channel=channel,
                timestamps_ms=np.asarray(ts, dtype=np.float64),
                values=np.asarray(vs, dtype=np.float64),
                device=device_name,
            )
        )
    if not out:
        raise IngestError(f"{path}: no samples")
    return out


def write_manifest(path: str | Path, schedule: SessionSchedule, epoch: str = "1970-01-01T00:00:00Z") -> None:
    doc = {
        "version": MANIFEST_VERSION,
        "session_id": schedule.session_id,
        "epoch": epoch,
        "segments": [
            {
                "start_s": seg.start_s,
                "end_s": seg.end_s,
                "label": int(seg.label),
                "clip_id": seg.clip_id,
            }
            for seg in schedule.segments
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2))


def read_manifest(path: str | Path) -> SessionSchedule:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestError(f"cannot read manifest {path}: {exc}") from exc
    try:
        segments = tuple(
            Segment(
                start_s=float(seg["start_s"]),
                end_s=float(seg["end_s"]),
                label=EmotionLabel.from_code(seg["label"]),
                clip_id=seg.get("clip_id"),
            )
            for seg in doc["segments"]
        )
        return SessionSchedule(session_id=str(doc["session_id"]), segments=segments)
    except (KeyError, ValueError, TypeError) as exc:
        raise ScheduleError(f"malformed manifest {path}: {exc}") from exc


LABELED_HEADER = (
    ["session_id", "timestamp_ms"]
    + [ch.value for ch in Channel]
    + ["label", "excluded", "clip_id"]
)


def write_labeled_csv(path: str | Path, signal_sets: list[LabeledSignalSet]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(LABELED_HEADER)
        for sigs in signal_sets:
            for i in range(len(sigs)):
                row = [sigs.session_id, int(round(sigs.timestamps_ms[i]))]
                row += [repr(float(sigs.channels[ch][i])) for ch in Channel]
                row += [
                    int(sigs.labels[i]),
                    int(sigs.excluded[i]),
                    sigs.clip_ids[i] or "",
                ]
                w.writerow(row)


def read_labeled_csv(path: str | Path) -> list[LabeledSignalSet]:
    """Read labeled signals back, one LabeledSignalSet per session in file order."""
    sessions: dict[str, dict[str, list]] = {}
    order: list[str] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != LABELED_HEADER:
            raise IngestError(f"{path}: unexpected labeled-signal header")
        for row in reader:
            if not row:
                continue
            sid = row[0]
            if sid not in sessions:
                sessions[sid] = {"t": [], "vals": [], "label": [], "excl": [], "clip": []}
                order.append(sid)
            rec = sessions[sid]
            rec["t"].append(float(row[1]))
            rec["vals"].append([float(x) for x in row[2 : 2 + len(Channel)]])
            rec["label"].append(int(row[2 + len(Channel)]))
            rec["excl"].append(bool(int(row[3 + len(Channel)])))
            rec["clip"].append(row[4 + len(Channel)] or None)

    out = []
    for sid in order:
        rec = sessions[sid]
        vals = np.asarray(rec["vals"], dtype=np.float64)
        out.append(
            LabeledSignalSet(
                session_id=sid,
                timestamps_ms=np.asarray(rec["t"], dtype=np.float64),
                channels={ch: vals[:, k].copy() for k, ch in enumerate(Channel)},
                labels=np.asarray(rec["label"], dtype=np.int8),
                excluded=np.asarray(rec["excl"], dtype=bool),
                clip_ids=list(rec["clip"]),
            )
        )
    if not out:
        raise IngestError(f"{path}: no labeled samples")
    return out
