"""Subject profile: questionnaire priors, ranking feedback, tag exclusions.

Effectiveness estimates are replayed from the full ranking log so that a
resubmitted (session, clip) ranking replaces its first submission instead of
double-counting. Exclusions are absorbing: once a (tag, emotion) pair earns
two strikes it never reappears in generated plans (manual reset only).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import QuestionnaireError, ValidationError
from ..labels import EMOTIONS, EmotionLabel
from .clips import Ranking, StimulusClip

#: Effectiveness for tags nobody has answered or ranked yet.
NEUTRAL_EFFECTIVENESS = 0.5
#: Weight of the newest ranking in the moving-average update.
EMA_WEIGHT = 0.5
#: Off-target reports per (tag, emotion) before the pair is excluded.
STRIKES_TO_EXCLUDE = 2


@dataclass(frozen=True)
class QuestionnaireAnswer:
    """Affinity 1-10 of one stimulus category (tag) for one target emotion."""

    emotion: EmotionLabel
    tag: str
    affinity: int

    def __post_init__(self):
        object.__setattr__(self, "emotion", EmotionLabel(self.emotion))
        if not isinstance(self.affinity, int) or not 1 <= self.affinity <= 10:
            raise QuestionnaireError(
                f"affinity must be an integer in 1..10, got {self.affinity!r}"
            )
        if self.emotion == EmotionLabel.REST:
            raise QuestionnaireError("questionnaire answers target emotions, not Rest")


@dataclass
class _LogEntry:
    ranking: Ranking
    tags: frozenset[str]
    target_emotion: EmotionLabel


@dataclass
class SubjectProfile:
    """Adaptive per-subject state driving stimulus selection."""

    subject_id: str
    priors: dict[tuple[str, int], float] = field(default_factory=dict)
    effectiveness: dict[tuple[str, int], float] = field(default_factory=dict)
    strikes: dict[tuple[str, int], set[tuple[str, str]]] = field(default_factory=dict)
    excluded: set[tuple[str, int]] = field(default_factory=set)
    ranking_log: dict[tuple[str, str], _LogEntry] = field(default_factory=dict)
    shown_clips: set[str] = field(default_factory=set)
    planned_sessions: list[str] = field(default_factory=list)
    completed_sessions: list[str] = field(default_factory=list)
    emotion_coverage: dict[int, int] = field(default_factory=dict)
    last_session_valence: str = ""
    label_merges: dict[int, int] = field(default_factory=dict)

    def effectiveness_for(self, tag: str, emotion: EmotionLabel) -> float:
        key = (tag, int(emotion))
        if key in self.effectiveness:
            return self.effectiveness[key]
        return self.priors.get(key, NEUTRAL_EFFECTIVENESS)

    def clip_effectiveness(self, clip: StimulusClip) -> float:
        if not clip.tags:
            return NEUTRAL_EFFECTIVENESS
        scores = [self.effectiveness_for(t, clip.target_emotion) for t in sorted(clip.tags)]
        return sum(scores) / len(scores)

    def is_excluded(self, clip: StimulusClip, emotion: EmotionLabel | None = None) -> bool:
        target = int(emotion if emotion is not None else clip.target_emotion)
        return any((tag, target) in self.excluded for tag in clip.tags)

    def reset_exclusion(self, tag: str, emotion: EmotionLabel) -> None:
        """Manual reset: the only way an excluded pair comes back."""
        key = (tag, int(emotion))
        self.excluded.discard(key)
        self.strikes.pop(key, None)

    def record_plan(self, session_id: str, clip_ids, emotions, majority_negative: bool) -> None:
        self.planned_sessions.append(session_id)
        self.shown_clips.update(clip_ids)
        for emotion in emotions:
            code = int(emotion)
            self.emotion_coverage[code] = self.emotion_coverage.get(code, 0) + 1
        self.last_session_valence = "negative" if majority_negative else "positive"

    def mark_session_complete(self, session_id: str) -> None:
        if session_id not in self.completed_sessions:
            self.completed_sessions.append(session_id)

    def _replay_effectiveness(self) -> None:
        self.effectiveness = {}
        for entry in self.ranking_log.values():
            observed = entry.ranking.score / 10.0
            for tag in sorted(entry.tags):
                key = (tag, int(entry.target_emotion))
                prev = self.effectiveness.get(
                    key, self.priors.get(key, NEUTRAL_EFFECTIVENESS)
                )
                self.effectiveness[key] = (1 - EMA_WEIGHT) * prev + EMA_WEIGHT * observed

    def _rebuild_strikes(self) -> None:
        self.strikes = {}
        for (session_id, clip_id), entry in self.ranking_log.items():
            evoked = entry.ranking.evoked_emotion
            if evoked is None or evoked == entry.target_emotion:
                continue
            for tag in entry.tags:
                key = (tag, int(entry.target_emotion))
                self.strikes.setdefault(key, set()).add((session_id, clip_id))
        # exclusions only ever grow
        for key, events in self.strikes.items():
            if len(events) >= STRIKES_TO_EXCLUDE:
                self.excluded.add(key)

    def to_dict(self) -> dict:
        return {
            "subject_id": self.subject_id,
            "priors": [[t, e, v] for (t, e), v in sorted(self.priors.items())],
            "excluded": sorted([t, e] for (t, e) in self.excluded),
            "ranking_log": [
                {
                    "ranking": entry.ranking.to_dict(),
                    "tags": sorted(entry.tags),
                    "target_emotion": int(entry.target_emotion),
                }
                for entry in self.ranking_log.values()
            ],
            "shown_clips": sorted(self.shown_clips),
            "planned_sessions": list(self.planned_sessions),
            "completed_sessions": list(self.completed_sessions),
            "emotion_coverage": {str(k): v for k, v in sorted(self.emotion_coverage.items())},
            "last_session_valence": self.last_session_valence,
            "label_merges": {str(k): v for k, v in sorted(self.label_merges.items())},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SubjectProfile":
        profile = cls(subject_id=doc["subject_id"])
        profile.priors = {(t, int(e)): float(v) for t, e, v in doc.get("priors", [])}
        profile.excluded = {(t, int(e)) for t, e in doc.get("excluded", [])}
        for item in doc.get("ranking_log", []):
            ranking = Ranking.from_dict(item["ranking"])
            profile.ranking_log[(ranking.session_id, ranking.clip_id)] = _LogEntry(
                ranking=ranking,
                tags=frozenset(item["tags"]),
                target_emotion=EmotionLabel(item["target_emotion"]),
            )
        profile.shown_clips = set(doc.get("shown_clips", ()))
        profile.planned_sessions = list(doc.get("planned_sessions", ()))
        profile.completed_sessions = list(doc.get("completed_sessions", ()))
        profile.emotion_coverage = {
            int(k): int(v) for k, v in doc.get("emotion_coverage", {}).items()
        }
        profile.last_session_valence = doc.get("last_session_valence", "")
        profile.label_merges = {
            int(k): int(v) for k, v in doc.get("label_merges", {}).items()
        }
        profile._replay_effectiveness()
        profile._rebuild_strikes()
        return profile


def seed_profile(
    answers: list[QuestionnaireAnswer], subject_id: str = "subject"
) -> SubjectProfile:
    """Build the initial profile from questionnaire affinities.

    Every one of the six emotions must be answered at least once. Low
    affinities (declared desensitizations) become low priors, not
    exclusions: the subject may still be surprised by good material.
    """
    if not answers:
        raise QuestionnaireError("empty questionnaire")
    covered = {int(a.emotion) for a in answers}
    missing = [EmotionLabel(e).display_name for e in EMOTIONS if int(e) not in covered]
    if missing:
        raise QuestionnaireError(f"questionnaire missing emotions: {', '.join(missing)}")
    profile = SubjectProfile(subject_id=subject_id)
    for answer in answers:
        profile.priors[(answer.tag, int(answer.emotion))] = answer.affinity / 10.0
    return profile


def ingest_ranking(
    profile: SubjectProfile, ranking: Ranking, clip: StimulusClip
) -> SubjectProfile:
    """Fold one ranking into the profile (idempotent per (session, clip)).

    The per-tag effectiveness for the clip's target emotion moves toward
    score/10; an off-target evoked emotion adds an exclusion strike to each
    of the clip's tags, and the second strike excludes the pair for good.
    """
    if ranking.clip_id != clip.clip_id:
        raise ValidationError(
            f"ranking clip {ranking.clip_id!r} does not match clip {clip.clip_id!r}"
        )
    key = (ranking.session_id, ranking.clip_id)
    profile.ranking_log[key] = _LogEntry(
        ranking=ranking, tags=clip.tags, target_emotion=clip.target_emotion
    )
    profile._replay_effectiveness()
    profile._rebuild_strikes()
    return profile
