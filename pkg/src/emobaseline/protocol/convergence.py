"""Convergence detection: does every emotion have enough high-ranked material?"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..labels import EMOTIONS, EmotionLabel
from .clips import StimulusClip, pool_by_id
from .profile import SubjectProfile

CONVERGED = "converged"
NEED_MORE = "need_more"
MAX_ITERATIONS = "max_iterations"

#: Personalized-baseline target: minutes of rank >= 7 material per emotion.
DEFAULT_TARGET_MINUTES = 50.0
DEFAULT_MIN_SCORE = 7
DEFAULT_SESSION_CAP = 9


@dataclass
class ConvergenceReport:
    status: str
    deficient: list[EmotionLabel] = field(default_factory=list)
    minutes: dict[int, float] = field(default_factory=dict)
    target_minutes: float = DEFAULT_TARGET_MINUTES
    min_score: int = DEFAULT_MIN_SCORE
    sessions_completed: int = 0
    session_cap: int = DEFAULT_SESSION_CAP

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "deficient": [int(e) for e in self.deficient],
            "deficient_names": [e.display_name for e in self.deficient],
            "minutes": {str(k): round(v, 2) for k, v in sorted(self.minutes.items())},
            "target_minutes": self.target_minutes,
            "min_score": self.min_score,
            "sessions_completed": self.sessions_completed,
            "session_cap": self.session_cap,
        }


def check_convergence(
    profile: SubjectProfile,
    pool: list[StimulusClip],
    target_minutes: float = DEFAULT_TARGET_MINUTES,
    min_score: int = DEFAULT_MIN_SCORE,
    session_cap: int = DEFAULT_SESSION_CAP,
) -> ConvergenceReport:
    """Converged once every emotion holds >= target minutes of rank >= min_score
    clips; otherwise lists the deficient emotions, or reports the session cap."""
    index = pool_by_id(pool)
    best_score: dict[str, tuple[int, int]] = {}
    for entry in profile.ranking_log.values():
        ranking = entry.ranking
        prev = best_score.get(ranking.clip_id)
        if prev is None or ranking.score > prev[0]:
            best_score[ranking.clip_id] = (ranking.score, int(entry.target_emotion))

    minutes = {int(e): 0.0 for e in EMOTIONS}
    for clip_id, (score, target) in best_score.items():
        if score < min_score:
            continue
        clip = index.get(clip_id)
        if clip is None:
            continue
        target = profile.label_merges.get(target, target)
        minutes[target] = minutes.get(target, 0.0) + clip.duration_s / 60.0

    merged_away = set(profile.label_merges)
    active = [e for e in EMOTIONS if int(e) not in merged_away]
    deficient = [e for e in active if minutes[int(e)] < target_minutes]

    completed = len(profile.completed_sessions)
    if not deficient:
        status = CONVERGED
    elif completed >= session_cap:
        status = MAX_ITERATIONS
    else:
        status = NEED_MORE
    return ConvergenceReport(
        status=status,
        deficient=deficient,
        minutes=minutes,
        target_minutes=target_minutes,
        min_score=min_score,
        sessions_completed=completed,
        session_cap=session_cap,
    )
