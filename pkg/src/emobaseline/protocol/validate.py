"""Independent structural validation of session plans.

This walks the plan item list directly and shares no logic with the
generator, so it can gate generated plans and audit hand-written ones.
"""

from __future__ import annotations

from ..errors import PlanError
from ..labels import NEGATIVE_EMOTIONS, POSITIVE_EMOTIONS
from .clips import StimulusClip, pool_by_id
from .planner import PERSONALIZED_ORDER, ClipBlock, PlanConstraints, RestBlock, SessionPlan
from .profile import SubjectProfile


def validate_plan(
    plan: SessionPlan,
    pool: list[StimulusClip],
    profile: SubjectProfile | None = None,
    constraints: PlanConstraints = PlanConstraints(),
    history: set[str] | None = None,
) -> list[str]:
    """Return every constraint violation (empty list = plan is valid).

    ``history`` is the set of clip ids already shown in earlier sessions;
    it defaults to the profile's record minus this plan's own clips.
    """
    violations: list[str] = []
    index = pool_by_id(pool)
    cast = violations.append

    if not plan.items:
        return ["plan has no items"]
    if not isinstance(plan.items[0], RestBlock):
        cast("plan does not start with a rest block")

    rest_s = constraints.personalized_rest_s if plan.personalized else constraints.rest_s

    # structure: groups of same-emotion clips, exactly one rest before each group
    prev = None
    group_emotions = []
    for item in plan.items:
        if isinstance(item, RestBlock):
            if item.duration_s != rest_s:
                cast(
                    f"rest block of {item.duration_s}s; protocol rest is {rest_s}s"
                )
            if isinstance(prev, RestBlock):
                cast("two consecutive rest blocks")
        elif isinstance(item, ClipBlock):
            if isinstance(prev, RestBlock):
                group_emotions.append(item.target_emotion)
            elif isinstance(prev, ClipBlock):
                if prev.target_emotion != item.target_emotion:
                    cast(
                        f"emotion change {prev.target_emotion.display_name} -> "
                        f"{item.target_emotion.display_name} without a rest block"
                    )
            else:
                cast("plan does not start with a rest block")
                group_emotions.append(item.target_emotion)
        else:
            cast(f"unknown item type {type(item).__name__}")
        prev = item
    if isinstance(prev, RestBlock):
        cast("plan ends with a dangling rest block")

    if len(set(group_emotions)) != len(group_emotions):
        cast("an emotion appears in more than one group")

    # emotion count and, for the personalized session, the fixed order
    distinct = list(dict.fromkeys(group_emotions))
    if plan.personalized:
        if tuple(distinct) != PERSONALIZED_ORDER:
            cast(
                "personalized session must present "
                + " -> ".join(e.display_name for e in PERSONALIZED_ORDER)
            )
    else:
        if not constraints.min_emotions <= len(distinct) <= constraints.max_emotions:
            cast(
                f"{len(distinct)} distinct emotions; protocol allows "
                f"{constraints.min_emotions}-{constraints.max_emotions}"
            )

    # valence ordering: never positive -> negative, end positive when mixed
    for a, b in zip(group_emotions, group_emotions[1:]):
        if a in POSITIVE_EMOTIONS and b in NEGATIVE_EMOTIONS:
            cast(
                f"abrupt valence drop {a.display_name} -> {b.display_name}"
            )
    has_pos = any(e in POSITIVE_EMOTIONS for e in group_emotions)
    has_neg = any(e in NEGATIVE_EMOTIONS for e in group_emotions)
    if has_pos and has_neg and group_emotions[-1] not in POSITIVE_EMOTIONS:
        cast("mixed-valence session must end on a positive emotion")

    # per-group clip counts
    group_sizes: dict = {}
    for emotion, blocks in plan.emotion_groups():
        group_sizes[emotion] = len(blocks)
    min_clips = 1 if plan.personalized else constraints.min_clips_per_emotion
    for emotion, size in group_sizes.items():
        if not min_clips <= size <= constraints.max_clips_per_emotion:
            cast(
                f"{emotion.display_name} group has {size} clips; allowed "
                f"{min_clips}-{constraints.max_clips_per_emotion}"
            )

    # clip-level checks
    seen: set[str] = set()
    plan_clip_ids = {b.clip_id for b in plan.clip_blocks}
    if history is None and profile is not None:
        history = profile.shown_clips - plan_clip_ids
    history = history or set()
    for block in plan.clip_blocks:
        clip = index.get(block.clip_id)
        if clip is None:
            cast(f"clip {block.clip_id!r} not in pool")
            continue
        if block.clip_id in seen:
            cast(f"clip {block.clip_id!r} repeated within the plan")
        seen.add(block.clip_id)
        if block.clip_id in history:
            cast(f"clip {block.clip_id!r} was already shown in a previous session")
        if clip.target_emotion != block.target_emotion:
            cast(
                f"clip {block.clip_id!r} targets {clip.target_emotion.display_name}, "
                f"scheduled for {block.target_emotion.display_name}"
            )
        if clip.is_compilation:
            if clip.target_emotion not in POSITIVE_EMOTIONS:
                cast(f"compilation {block.clip_id!r} targets a negative emotion")
            if not constraints.min_compilation_s <= clip.duration_s <= constraints.max_compilation_s:
                cast(
                    f"compilation {block.clip_id!r} duration {clip.duration_s}s outside "
                    f"{constraints.min_compilation_s}-{constraints.max_compilation_s}s"
                )
        elif not constraints.min_clip_s <= clip.duration_s <= constraints.max_clip_s:
            cast(
                f"clip {block.clip_id!r} duration {clip.duration_s}s outside "
                f"{constraints.min_clip_s}-{constraints.max_clip_s}s"
            )
        if profile is not None and profile.is_excluded(clip, block.target_emotion):
            cast(
                f"clip {block.clip_id!r} uses a tag excluded for "
                f"{block.target_emotion.display_name}"
            )

    # total duration (standard sessions only)
    if not plan.personalized:
        total = plan.planned_total_s
        if not constraints.min_total_s <= total <= constraints.max_total_s:
            cast(
                f"total duration {total / 60:.1f} min outside "
                f"{constraints.min_total_s / 60:.0f}-{constraints.max_total_s / 60:.0f} min"
            )

    return violations


def ensure_valid(plan, pool, profile=None, constraints=PlanConstraints(), history=None) -> None:
    violations = validate_plan(plan, pool, profile, constraints, history)
    if violations:
        raise PlanError("; ".join(violations))
