"""Stimulus pool entries and post-session rankings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ValidationError
from ..labels import POSITIVE_EMOTIONS, EmotionLabel

RECENCY_CLASSES = ("contemporary", "classic")


@dataclass(frozen=True)
class StimulusClip:
    """One pool entry: an external video clip targeting one emotion."""

    clip_id: str
    title: str
    source_url: str
    target_emotion: EmotionLabel
    tags: frozenset[str]
    duration_s: float
    is_compilation: bool = False
    is_personal: bool = False
    recency_class: str = "contemporary"

    def __post_init__(self):
        object.__setattr__(self, "tags", frozenset(self.tags))
        object.__setattr__(self, "target_emotion", EmotionLabel(self.target_emotion))
        if self.duration_s <= 0:
            raise ValidationError(f"clip {self.clip_id}: duration must be positive")
        if self.target_emotion == EmotionLabel.REST:
            raise ValidationError(f"clip {self.clip_id}: cannot target Rest")
        if self.is_compilation and self.target_emotion not in POSITIVE_EMOTIONS:
            raise ValidationError(
                f"clip {self.clip_id}: compilations may only target positive emotions"
            )
        if self.recency_class not in RECENCY_CLASSES:
            raise ValidationError(
                f"clip {self.clip_id}: recency_class must be one of {RECENCY_CLASSES}"
            )

    def to_dict(self) -> dict:
        return {
            "clip_id": self.clip_id,
            "title": self.title,
            "source_url": self.source_url,
            "target_emotion": int(self.target_emotion),
            "tags": sorted(self.tags),
            "duration_s": self.duration_s,
            "is_compilation": self.is_compilation,
            "is_personal": self.is_personal,
            "recency_class": self.recency_class,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StimulusClip":
        return cls(
            clip_id=doc["clip_id"],
            title=doc.get("title", doc["clip_id"]),
            source_url=doc.get("source_url", ""),
            target_emotion=EmotionLabel(doc["target_emotion"]),
            tags=frozenset(doc.get("tags", ())),
            duration_s=float(doc["duration_s"]),
            is_compilation=bool(doc.get("is_compilation", False)),
            is_personal=bool(doc.get("is_personal", False)),
            recency_class=doc.get("recency_class", "contemporary"),
        )


def pool_by_id(pool: list[StimulusClip]) -> dict[str, StimulusClip]:
    index = {}
    for clip in pool:
        if clip.clip_id in index:
            raise ValidationError(f"duplicate clip_id {clip.clip_id!r} in pool")
        index[clip.clip_id] = clip
    return index


def save_pool(path: str | Path, pool: list[StimulusClip]) -> None:
    Path(path).write_text(json.dumps([c.to_dict() for c in pool], indent=2))


def load_pool(path: str | Path) -> list[StimulusClip]:
    docs = json.loads(Path(path).read_text())
    return [StimulusClip.from_dict(d) for d in docs]


@dataclass(frozen=True)
class Ranking:
    """Post-session 1-10 score of one clip's effectiveness, with optional
    evoked-emotion correction when the clip landed off target."""

    clip_id: str
    session_id: str
    score: int
    evoked_emotion: EmotionLabel | None = None
    effective_span: tuple[float, float] | None = None
    notes: str = ""

    def __post_init__(self):
        if not isinstance(self.score, int) or not 1 <= self.score <= 10:
            raise ValidationError(
                f"ranking score must be an integer in 1..10, got {self.score!r}"
            )
        if self.evoked_emotion is not None:
            object.__setattr__(self, "evoked_emotion", EmotionLabel(self.evoked_emotion))
        if self.effective_span is not None:
            a, b = self.effective_span
            if b <= a or a < 0:
                raise ValidationError(f"bad effective span {self.effective_span}")

    def to_dict(self) -> dict:
        return {
            "clip_id": self.clip_id,
            "session_id": self.session_id,
            "score": self.score,
            "evoked_emotion": None if self.evoked_emotion is None else int(self.evoked_emotion),
            "effective_span": list(self.effective_span) if self.effective_span else None,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Ranking":
        evoked = doc.get("evoked_emotion")
        span = doc.get("effective_span")
        return cls(
            clip_id=doc["clip_id"],
            session_id=doc["session_id"],
            score=int(doc["score"]),
            evoked_emotion=None if evoked is None else EmotionLabel(evoked),
            effective_span=None if span is None else (float(span[0]), float(span[1])),
            notes=doc.get("notes", ""),
        )
