"""Non-overlapping window cutting over labeled 1 Hz signal grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..labels import Channel, EmotionLabel
from ..signal.series import NO_LABEL, LabeledSignalSet

DEFAULT_WINDOW_SAMPLES = 32


@dataclass(frozen=True)
class WindowConfig:
    """Window length in samples; windows never overlap."""

    w: int = DEFAULT_WINDOW_SAMPLES

    def __post_init__(self):
        if self.w < 2:
            raise ConfigError(f"window length must be >= 2 samples, got {self.w}")


@dataclass(frozen=True)
class Window:
    """One w-sample slice of all channels with its label and provenance."""

    channels: dict[Channel, np.ndarray]
    label: EmotionLabel
    session_id: str
    window_start_s: float
    clip_id: str | None = None

    @property
    def w(self) -> int:
        return int(next(iter(self.channels.values())).size)


def _runs(signals: LabeledSignalSet):
    """Maximal stretches of consecutive samples sharing (label, clip_id), none excluded."""
    n = len(signals)
    i = 0
    while i < n:
        if signals.excluded[i] or signals.labels[i] == NO_LABEL:
            i += 1
            continue
        j = i + 1
        while (
            j < n
            and not signals.excluded[j]
            and signals.labels[j] == signals.labels[i]
            and signals.clip_ids[j] == signals.clip_ids[i]
        ):
            j += 1
        yield i, j
        i = j


def cut_windows(signals: LabeledSignalSet, cfg: WindowConfig = WindowConfig()) -> list[Window]:
    """Cut consecutive non-overlapping windows of exactly ``cfg.w`` samples.

    Windows start at the first sample of each maximal identically-labeled,
    non-excluded run; a trailing partial window is dropped. Runs shorter than
    the window produce nothing.
    """
    w = cfg.w
    t = signals.t_seconds
    out = []
    for start, end in _runs(signals):
        n_windows = (end - start) // w
        for k in range(n_windows):
            a = start + k * w
            b = a + w
            out.append(
                Window(
                    channels={ch: v[a:b].copy() for ch, v in signals.channels.items()},
                    label=EmotionLabel.from_code(signals.labels[a]),
                    session_id=signals.session_id,
                    window_start_s=float(t[a]),
                    clip_id=signals.clip_ids[a],
                )
            )
    return out


def cut_windows_all(
    signal_sets: list[LabeledSignalSet], cfg: WindowConfig = WindowConfig()
) -> list[Window]:
    """Cut windows across sessions; output ordered by (session_id, window_start_s)."""
    windows = []
    for sigs in signal_sets:
        windows.extend(cut_windows(sigs, cfg))
    windows.sort(key=lambda win: (win.session_id, win.window_start_s))
    return windows
