"""Emotion labels and biosignal channel identifiers."""

from __future__ import annotations

import enum


class EmotionLabel(enum.IntEnum):
    """The six targeted emotions plus the rest (calm) state."""

    REST = 0
    FEAR = 1
    SAD_ANGER = 2
    AWE_REV = 3
    DISGUST = 4
    JOY_AMUS = 5
    CONTENT = 6

    @property
    def display_name(self) -> str:
        return _DISPLAY[self]

    @classmethod
    def from_code(cls, code: int) -> "EmotionLabel":
        return cls(int(code))


_DISPLAY = {
    EmotionLabel.REST: "Rest",
    EmotionLabel.FEAR: "Fear",
    EmotionLabel.SAD_ANGER: "Sad/Anger",
    EmotionLabel.AWE_REV: "Awe/Rev",
    EmotionLabel.DISGUST: "Disgust",
    EmotionLabel.JOY_AMUS: "Joy/Amus",
    EmotionLabel.CONTENT: "Content",
}

# Valence split of the six non-rest emotions.
NEGATIVE_EMOTIONS = frozenset(
    {EmotionLabel.FEAR, EmotionLabel.SAD_ANGER, EmotionLabel.DISGUST}
)
POSITIVE_EMOTIONS = frozenset(
    {EmotionLabel.AWE_REV, EmotionLabel.JOY_AMUS, EmotionLabel.CONTENT}
)
EMOTIONS = tuple(sorted(NEGATIVE_EMOTIONS | POSITIVE_EMOTIONS))

# Binary collapse codes.
NEGATIVE, POSITIVE = 0, 1
BINARY_NAMES = {NEGATIVE: "Negative", POSITIVE: "Positive"}


class Channel(str, enum.Enum):
    """The six recorded biosignal channels.

    SKT develops a monotone within-session pattern and is treated as
    leak-prone: it is recorded and featurized but masked out of datasets
    by default.
    """

    HR = "HR"
    HRV = "HRV"
    HRP = "HRP"
    BR = "BR"
    GSR = "GSR"
    SKT = "SKT"

    @property
    def leak_prone(self) -> bool:
        return self is Channel.SKT


CHANNELS = tuple(Channel)
