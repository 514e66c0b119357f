"""Simulated subjects for exercising the adaptive selection loop."""

from __future__ import annotations

import numpy as np

from ..labels import EMOTIONS, EmotionLabel
from .clips import Ranking, StimulusClip
from .planner import PlanConstraints, SessionPlan, generate_session
from .profile import QuestionnaireAnswer, SubjectProfile, ingest_ranking, seed_profile

#: Tag vocabulary per emotion used by the random pool builder.
TAG_SETS = {
    EmotionLabel.FEAR: ("supernatural", "jump-scare", "thriller", "found-footage"),
    EmotionLabel.SAD_ANGER: ("tragedy", "news", "war", "farewell"),
    EmotionLabel.DISGUST: ("gross-out", "medical", "food", "insects"),
    EmotionLabel.AWE_REV: ("nature", "space", "talent", "architecture"),
    EmotionLabel.JOY_AMUS: ("compilation", "standup", "fails", "animals"),
    EmotionLabel.CONTENT: ("nature", "music", "slow-tv", "crafts"),
}


def make_random_pool(
    seed: int = 0,
    clips_per_emotion: int = 40,
    constraints: PlanConstraints = PlanConstraints(),
    single_tag_fraction: float = 0.5,
    duration_range: tuple[float, float] | None = None,
) -> list[StimulusClip]:
    """A plausible curated pool: varied durations, 1-2 tags per clip,
    compilations only for the positive emotions."""
    rng = np.random.Generator(np.random.PCG64(seed))
    lo, hi = duration_range or (constraints.min_clip_s, constraints.max_clip_s)
    pool = []
    for emotion in EMOTIONS:
        tags = TAG_SETS[emotion]
        for i in range(clips_per_emotion):
            is_comp = emotion in (EmotionLabel.JOY_AMUS, EmotionLabel.AWE_REV) and i % 10 == 9
            if is_comp:
                duration = float(rng.integers(constraints.min_compilation_s, 1801))
            else:
                duration = float(rng.integers(int(lo), int(hi) + 1))
            n_tags = 1 if rng.random() < single_tag_fraction else 2
            chosen = tuple(rng.choice(len(tags), size=n_tags, replace=False))
            clip_id = f"{emotion.name.lower()}-{i:03d}"
            pool.append(
                StimulusClip(
                    clip_id=clip_id,
                    title=f"{emotion.display_name} clip {i}",
                    source_url=f"https://video.example/{clip_id}",
                    target_emotion=emotion,
                    tags=frozenset(tags[k] for k in chosen),
                    duration_s=duration,
                    is_compilation=is_comp,
                )
            )
    return pool


def neutral_questionnaire(pool: list[StimulusClip]) -> list[QuestionnaireAnswer]:
    """Affinity 5 for every (emotion, tag) pair occurring in the pool."""
    answers = []
    seen = set()
    for clip in pool:
        for tag in sorted(clip.tags):
            key = (int(clip.target_emotion), tag)
            if key not in seen:
                seen.add(key)
                answers.append(
                    QuestionnaireAnswer(emotion=clip.target_emotion, tag=tag, affinity=5)
                )
    return answers


def true_tag_weights(seed: int) -> dict[tuple[str, int], float]:
    """A fixed ground-truth preference profile: weight in [0, 1] per
    (tag, emotion) pair of the tag vocabulary."""
    rng = np.random.Generator(np.random.PCG64(seed))
    weights = {}
    for emotion, tags in TAG_SETS.items():
        for tag in tags:
            weights[(tag, int(emotion))] = float(rng.uniform(0.05, 0.95))
    return weights


def simulated_score(
    clip: StimulusClip, weights: dict[tuple[str, int], float]
) -> int:
    """Deterministic subject response: 1-10 from the strongest matching
    category (the best-fitting tag dominates the reaction)."""
    if clip.tags:
        w = max(weights.get((t, int(clip.target_emotion)), 0.5) for t in sorted(clip.tags))
    else:
        w = 0.5
    return int(min(10, max(1, round(10 * w))))


def run_simulation(
    pool: list[StimulusClip],
    weights: dict[tuple[str, int], float],
    n_sessions: int = 4,
    constraints: PlanConstraints = PlanConstraints(),
    subject_id: str = "sim",
    emotions=None,
) -> tuple[SubjectProfile, list[SessionPlan], list[float]]:
    """Generate/rank n sessions; returns the mean ranking of each session.

    Pinning ``emotions`` keeps every session on the same targets so the
    session means trace a clean learning curve; with full rotation,
    consecutive sessions cover disjoint emotions and the first visit to each
    is unguided.
    """
    profile = seed_profile(neutral_questionnaire(pool), subject_id=subject_id)
    index = {c.clip_id: c for c in pool}
    plans = []
    session_means = []
    for _ in range(n_sessions):
        plan = generate_session(profile, pool, constraints, emotions=emotions)
        profile.record_plan(
            plan.session_id,
            [b.clip_id for b in plan.clip_blocks],
            plan.emotions_covered,
            plan.majority_negative,
        )
        scores = []
        for block in plan.clip_blocks:
            clip = index[block.clip_id]
            score = simulated_score(clip, weights)
            ingest_ranking(
                profile,
                Ranking(clip_id=clip.clip_id, session_id=plan.session_id, score=score),
                clip,
            )
            scores.append(score)
        profile.mark_session_complete(plan.session_id)
        plans.append(plan)
        session_means.append(float(np.mean(scores)))
    return profile, plans, session_means
