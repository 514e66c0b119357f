"""Synthetic subject generator: desk-scale ground truth for the pipeline.

Real recordings are single-subject and private, so evaluation properties are
demonstrated on generated subjects: class-conditional Gaussian channels with
AR(1) temporal correlation, configurable class separability, and an optional
leak-mode SKT that rises monotonically within each session.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigError
from ..labels import CHANNELS, EMOTIONS, Channel, EmotionLabel
from ..signal.io import write_manifest, write_recording_csv
from ..signal.series import Segment, SessionSchedule, TimeSeries

#: Device split mirroring the two-device recording setup.
DEVICE_CHANNELS = {
    "chest": (Channel.HR, Channel.HRV, Channel.HRP, Channel.BR),
    "wrist": (Channel.GSR, Channel.SKT),
}

#: Per-label segment lengths whose floor(len/32) window counts reproduce the
#: reference experiment breakdown (240/129/122/158/109/149/120 windows).
TABLE_SEGMENT_LENGTHS = {
    EmotionLabel.REST: 7680,
    EmotionLabel.FEAR: 4128,
    EmotionLabel.SAD_ANGER: 3906,
    EmotionLabel.AWE_REV: 5058,
    EmotionLabel.DISGUST: 3488,
    EmotionLabel.JOY_AMUS: 4768,
    EmotionLabel.CONTENT: 3840,
}

SKT_MODES = ("noise", "leak", "informative")


@dataclass(frozen=True)
class SyntheticSpec:
    """Per-(channel, label) Gaussian parameters plus generation knobs."""

    class_means: dict[tuple[Channel, int], float]
    class_stds: dict[tuple[Channel, int], float]
    ar_coeff: float = 0.8
    skt_mode: str = "noise"
    skt_drift: float = 3.0
    chest_rate_hz: float = 1.0
    wrist_rate_hz: float = 1.0
    wrist_offset_ms: int = 0

    def __post_init__(self):
        labels = [int(lab) for lab in EmotionLabel]
        missing = [
            (ch.value, lab)
            for ch in CHANNELS
            for lab in labels
            if (ch, lab) not in self.class_means or (ch, lab) not in self.class_stds
        ]
        if missing:
            raise ConfigError(f"spec missing channel/label stats: {missing[:5]}...")
        if self.skt_mode not in SKT_MODES:
            raise ConfigError(f"skt_mode must be one of {SKT_MODES}, got {self.skt_mode!r}")
        if not 0.0 <= self.ar_coeff < 1.0:
            raise ConfigError(f"ar_coeff must be in [0, 1), got {self.ar_coeff}")

    @classmethod
    def gaussian(
        cls,
        separability: float,
        seed: int = 0,
        skt_mode: str = "noise",
        ar_coeff: float = 0.8,
        noise_std: float = 1.0,
        **kwargs,
    ) -> "SyntheticSpec":
        """Draw per-class channel means ~ N(0, separability^2), unit-ish noise.

        separability 0 makes every class identical. SKT means stay flat
        unless skt_mode='informative'; 'leak' replaces SKT generation with a
        monotone within-session ramp.
        """
        if separability < 0:
            raise ConfigError(f"separability must be >= 0, got {separability}")
        rng = np.random.Generator(np.random.PCG64(seed))
        means = {}
        stds = {}
        for ch in CHANNELS:
            for lab in EmotionLabel:
                informative = ch is not Channel.SKT or skt_mode == "informative"
                means[(ch, int(lab))] = (
                    float(rng.normal(0.0, separability)) if informative else 0.0
                )
                stds[(ch, int(lab))] = noise_std
        return cls(
            class_means=means,
            class_stds=stds,
            ar_coeff=ar_coeff,
            skt_mode=skt_mode,
            **kwargs,
        )


def table_shape_schedule(
    session_id: str = "table1",
    lengths: dict[EmotionLabel, int] | None = None,
) -> SessionSchedule:
    """One contiguous run per label, in label-code order, starting at t=0."""
    lengths = lengths or TABLE_SEGMENT_LENGTHS
    segments = []
    t = 0.0
    for label in EmotionLabel:
        dur = float(lengths[label])
        clip = None if label == EmotionLabel.REST else f"{session_id}-{label.name.lower()}"
        segments.append(Segment(start_s=t, end_s=t + dur, label=label, clip_id=clip))
        t += dur
    return SessionSchedule(session_id=session_id, segments=tuple(segments))


def block_schedule(
    n_sessions: int,
    emotion_block_s: int = 320,
    rest_block_s: int = 60,
    rotate: bool = False,
    session_prefix: str = "sess",
) -> list[SessionSchedule]:
    """Sessions of all six emotions in blocks separated by short rests.

    With rotate=False every session presents the emotions in the same order,
    so elapsed session time predicts the label -- the layout that makes a
    monotone SKT leak.
    """
    if n_sessions < 1:
        raise ConfigError("need at least one session")
    schedules = []
    for s in range(n_sessions):
        order = list(EMOTIONS)
        if rotate:
            shift = s % len(order)
            order = order[shift:] + order[:shift]
        sid = f"{session_prefix}{s:03d}"
        segments = []
        t = 0.0
        segments.append(
            Segment(start_s=t, end_s=t + rest_block_s, label=EmotionLabel.REST)
        )
        t += rest_block_s
        for k, emotion in enumerate(order):
            clip = f"{sid}-clip-{emotion.name.lower()}"
            segments.append(
                Segment(start_s=t, end_s=t + emotion_block_s, label=emotion, clip_id=clip)
            )
            t += emotion_block_s
            segments.append(
                Segment(start_s=t, end_s=t + rest_block_s, label=EmotionLabel.REST)
            )
            t += rest_block_s
        schedules.append(SessionSchedule(session_id=sid, segments=tuple(segments)))
    return schedules


def protocol_schedule(seed: int = 0, n_sessions: int = 9) -> list[SessionSchedule]:
    """Schedules shaped like the nine-session protocol: 2-3 emotions per
    standard session inside 60-70 min, all six in the final personalized one."""
    rng = np.random.Generator(np.random.PCG64(seed))
    schedules = []
    coverage = {e: 0 for e in EMOTIONS}
    for s in range(n_sessions):
        sid = f"sess{s:03d}"
        personalized = s == n_sessions - 1
        if personalized:
            emotions = [
                EmotionLabel.SAD_ANGER,
                EmotionLabel.FEAR,
                EmotionLabel.DISGUST,
                EmotionLabel.AWE_REV,
                EmotionLabel.CONTENT,
                EmotionLabel.JOY_AMUS,
            ]
            rest_s, n_clips = 180, 1
        else:
            by_need = sorted(EMOTIONS, key=lambda e: (coverage[e], int(e)))
            emotions = sorted(by_need[: 2 + s % 2], key=lambda e: (in_positive(e), int(e)))
            rest_s, n_clips = 300, 2
        segments = []
        t = 0.0
        for emotion in emotions:
            segments.append(Segment(t, t + rest_s, EmotionLabel.REST))
            t += rest_s
            for c in range(n_clips):
                dur = float(rng.integers(300, 721))
                segments.append(
                    Segment(t, t + dur, emotion, clip_id=f"{sid}-{emotion.name.lower()}-{c}")
                )
                t += dur
            coverage[emotion] = coverage.get(emotion, 0) + 1
        schedules.append(SessionSchedule(session_id=sid, segments=tuple(segments)))
    return schedules


def in_positive(emotion: EmotionLabel) -> bool:
    from ..labels import POSITIVE_EMOTIONS

    return emotion in POSITIVE_EMOTIONS


@dataclass
class SyntheticSubject:
    """Generated recordings (per session, per device) plus their manifests."""

    spec: SyntheticSpec
    schedules: list[SessionSchedule]
    seed: int
    recordings: dict[str, dict[str, list[TimeSeries]]] = field(default_factory=dict)

    def write(self, outdir: str | Path) -> list[Path]:
        """Emit <outdir>/<session>/{chest.csv,wrist.csv,manifest.json}."""
        outdir = Path(outdir)
        session_dirs = []
        for schedule in self.schedules:
            sdir = outdir / schedule.session_id
            sdir.mkdir(parents=True, exist_ok=True)
            for device, streams in self.recordings[schedule.session_id].items():
                write_recording_csv(sdir / f"{device}.csv", streams)
            write_manifest(sdir / "manifest.json", schedule)
            session_dirs.append(sdir)
        return session_dirs


def _label_at(schedule: SessionSchedule, t_s: np.ndarray) -> np.ndarray:
    labels = np.full(t_s.size, int(EmotionLabel.REST), dtype=np.int64)
    for seg in schedule.segments:
        mask = (t_s >= seg.start_s) & (t_s < seg.end_s)
        labels[mask] = int(seg.label)
    return labels


def _ar1(rng: np.random.Generator, n: int, coeff: float) -> np.ndarray:
    eps = rng.normal(size=n)
    if coeff == 0.0:
        return eps
    out = np.empty(n)
    out[0] = eps[0]
    scale = np.sqrt(1.0 - coeff * coeff)
    for i in range(1, n):
        out[i] = coeff * out[i - 1] + scale * eps[i]
    return out


def generate_synthetic_subject(
    spec: SyntheticSpec, schedules: list[SessionSchedule], seed: int = 0
) -> SyntheticSubject:
    """Deterministically generate all recordings for the given schedules."""
    if not schedules:
        raise ConfigError("no schedules to generate")
    subject = SyntheticSubject(spec=spec, schedules=list(schedules), seed=seed)
    session_seeds = np.random.SeedSequence(seed).generate_state(len(schedules))
    for schedule, s_seed in zip(schedules, session_seeds):
        rng = np.random.Generator(np.random.PCG64(s_seed))
        start_ms = schedule.start_s * 1000.0
        end_ms = schedule.end_s * 1000.0
        duration_s = schedule.end_s - schedule.start_s
        per_device = {}
        for device, channels in DEVICE_CHANNELS.items():
            rate = spec.chest_rate_hz if device == "chest" else spec.wrist_rate_hz
            offset = 0 if device == "chest" else spec.wrist_offset_ms
            step_ms = 1000.0 / rate
            ts = np.arange(start_ms + offset, end_ms, step_ms)
            t_s = ts / 1000.0
            labels = _label_at(schedule, t_s)
            streams = []
            for ch in channels:
                if ch is Channel.SKT and spec.skt_mode == "leak":
                    base = float(rng.normal(0.0, 0.5))
                    ramp = spec.skt_drift * (t_s - schedule.start_s) / duration_s
                    jitter = np.abs(rng.normal(0.0, 0.01, size=ts.size))
                    values = base + ramp + np.cumsum(jitter) / ts.size
                else:
                    means = np.array(
                        [spec.class_means[(ch, int(lab))] for lab in labels]
                    )
                    stds = np.array(
                        [spec.class_stds[(ch, int(lab))] for lab in labels]
                    )
                    values = means + stds * _ar1(rng, ts.size, spec.ar_coeff)
                streams.append(
                    TimeSeries(
                        channel=ch,
                        timestamps_ms=ts.copy(),
                        values=values,
                        device=device,
                        sample_rate_hint=rate,
                    )
                )
            per_device[device] = streams
        subject.recordings[schedule.session_id] = per_device
    return subject
