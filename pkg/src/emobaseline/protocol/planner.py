"""Protocol-constrained session generation from the adaptive profile."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import PlanError, PoolExhaustedError
from ..labels import EMOTIONS, NEGATIVE_EMOTIONS, POSITIVE_EMOTIONS, EmotionLabel
from .clips import StimulusClip, pool_by_id
from .profile import SubjectProfile

#: Fixed emotion order of the fully personalized (final) session.
PERSONALIZED_ORDER = (
    EmotionLabel.SAD_ANGER,
    EmotionLabel.FEAR,
    EmotionLabel.DISGUST,
    EmotionLabel.AWE_REV,
    EmotionLabel.CONTENT,
    EmotionLabel.JOY_AMUS,
)


@dataclass(frozen=True)
class PlanConstraints:
    """Protocol rules for one session."""

    min_total_s: float = 3600.0
    max_total_s: float = 4200.0
    rest_s: float = 300.0
    personalized_rest_s: float = 180.0
    min_emotions: int = 2
    max_emotions: int = 3
    min_clips_per_emotion: int = 2
    max_clips_per_emotion: int = 4
    min_clip_s: float = 180.0
    max_clip_s: float = 720.0
    min_compilation_s: float = 600.0
    max_compilation_s: float = 2400.0
    session_cap: int = 9


@dataclass(frozen=True)
class RestBlock:
    duration_s: float


@dataclass(frozen=True)
class ClipBlock:
    clip_id: str
    target_emotion: EmotionLabel
    duration_s: float
    title: str = ""
    source_url: str = ""


@dataclass
class SessionPlan:
    """Ordered timeline of rest and clip blocks for one session."""

    session_id: str
    items: list
    personalized: bool = False
    schema_version: int = 1

    @property
    def planned_total_s(self) -> float:
        return float(sum(item.duration_s for item in self.items))

    @property
    def clip_blocks(self) -> list[ClipBlock]:
        return [item for item in self.items if isinstance(item, ClipBlock)]

    @property
    def emotions_covered(self) -> list[EmotionLabel]:
        seen: list[EmotionLabel] = []
        for block in self.clip_blocks:
            if block.target_emotion not in seen:
                seen.append(block.target_emotion)
        return seen

    def emotion_groups(self) -> list[tuple[EmotionLabel, list[ClipBlock]]]:
        """Contiguous stretches of clip blocks sharing a target emotion."""
        groups: list[tuple[EmotionLabel, list[ClipBlock]]] = []
        for item in self.items:
            if isinstance(item, RestBlock):
                continue
            if groups and groups[-1][0] == item.target_emotion and not self._rest_between(item):
                groups[-1][1].append(item)
            else:
                groups.append((item.target_emotion, [item]))
        return groups

    def _rest_between(self, block: ClipBlock) -> bool:
        # groups are rebuilt per call; adjacency in items decides grouping
        prev = None
        for item in self.items:
            if item is block:
                return isinstance(prev, RestBlock)
            prev = item
        return False

    @property
    def majority_negative(self) -> bool:
        emotions = self.emotions_covered
        neg = sum(1 for e in emotions if e in NEGATIVE_EMOTIONS)
        return neg > len(emotions) - neg

    def to_dict(self) -> dict:
        items = []
        for item in self.items:
            if isinstance(item, RestBlock):
                items.append({"kind": "rest", "duration_s": item.duration_s})
            else:
                items.append(
                    {
                        "kind": "clip",
                        "clip_id": item.clip_id,
                        "target_emotion": int(item.target_emotion),
                        "duration_s": item.duration_s,
                        "title": item.title,
                        "source_url": item.source_url,
                    }
                )
        return {
            "schema_version": self.schema_version,
            "session_id": self.session_id,
            "personalized": self.personalized,
            "planned_total_s": self.planned_total_s,
            "emotions_covered": [int(e) for e in self.emotions_covered],
            "items": items,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SessionPlan":
        items = []
        for item in doc["items"]:
            if item["kind"] == "rest":
                items.append(RestBlock(duration_s=float(item["duration_s"])))
            elif item["kind"] == "clip":
                items.append(
                    ClipBlock(
                        clip_id=item["clip_id"],
                        target_emotion=EmotionLabel(item["target_emotion"]),
                        duration_s=float(item["duration_s"]),
                        title=item.get("title", ""),
                        source_url=item.get("source_url", ""),
                    )
                )
            else:
                raise PlanError(f"unknown plan item kind {item.get('kind')!r}")
        return cls(
            session_id=doc["session_id"],
            items=items,
            personalized=bool(doc.get("personalized", False)),
            schema_version=int(doc.get("schema_version", 1)),
        )


def _length_ok(clip: StimulusClip, constraints: PlanConstraints) -> bool:
    if clip.is_compilation:
        return constraints.min_compilation_s <= clip.duration_s <= constraints.max_compilation_s
    return constraints.min_clip_s <= clip.duration_s <= constraints.max_clip_s


def _eligible(
    profile: SubjectProfile,
    pool: list[StimulusClip],
    emotion: EmotionLabel,
    constraints: PlanConstraints,
) -> list[StimulusClip]:
    """Clips usable for this emotion, best effectiveness first."""
    clips = [
        c
        for c in pool
        if c.target_emotion == emotion
        and c.clip_id not in profile.shown_clips
        and not profile.is_excluded(c)
        and _length_ok(c, constraints)
    ]
    clips.sort(key=lambda c: (-profile.clip_effectiveness(c), c.clip_id))
    return clips


def _need_order(profile: SubjectProfile) -> list[EmotionLabel]:
    merged_away = set(profile.label_merges)
    emotions = [e for e in EMOTIONS if int(e) not in merged_away]
    return sorted(emotions, key=lambda e: (profile.emotion_coverage.get(int(e), 0), int(e)))


def _group_order(subset, need_rank) -> list[EmotionLabel]:
    """Negatives first, positives last; within valence by coverage need."""
    negatives = [e for e in subset if e in NEGATIVE_EMOTIONS]
    positives = [e for e in subset if e in POSITIVE_EMOTIONS]
    key = lambda e: (need_rank[e], int(e))
    return sorted(negatives, key=key) + sorted(positives, key=key)


def _compose(session_id, order, picks, profile, rest_s, personalized=False) -> SessionPlan:
    items: list = []
    for emotion in order:
        items.append(RestBlock(duration_s=rest_s))
        # weakest first: sessions escalate toward the strongest stimulus
        for clip in sorted(picks[emotion], key=lambda c: (profile.clip_effectiveness(c), c.clip_id)):
            items.append(
                ClipBlock(
                    clip_id=clip.clip_id,
                    target_emotion=clip.target_emotion,
                    duration_s=clip.duration_s,
                    title=clip.title,
                    source_url=clip.source_url,
                )
            )
    return SessionPlan(session_id=session_id, items=items, personalized=personalized)


def _fit_duration(picks, order, remaining, profile, constraints) -> bool:
    """Grow/shrink/swap the selection into the total-duration window."""

    def total() -> float:
        rest = constraints.rest_s * len(order)
        return rest + sum(c.duration_s for e in order for c in picks[e])

    for _ in range(100):
        t = total()
        if t < constraints.min_total_s:
            options = [
                (e, cand)
                for e in order
                if len(picks[e]) < constraints.max_clips_per_emotion
                for cand in remaining[e]
                if t + cand.duration_s <= constraints.max_total_s
            ]
            if not options:
                break
            e, clip = max(
                options, key=lambda ec: (profile.clip_effectiveness(ec[1]), ec[1].clip_id)
            )
            picks[e].append(clip)
            remaining[e].remove(clip)
        elif t > constraints.max_total_s:
            options = [
                (e, c)
                for e in order
                if len(picks[e]) > constraints.min_clips_per_emotion
                for c in picks[e]
            ]
            if not options:
                break
            landing = [
                (e, c)
                for e, c in options
                if t - c.duration_s >= constraints.min_total_s
            ]
            pool_opts = landing or options
            e, clip = min(
                pool_opts, key=lambda ec: (profile.clip_effectiveness(ec[1]), ec[1].clip_id)
            )
            picks[e].remove(clip)
            remaining[e].insert(0, clip)
            if not landing:
                break
        else:
            return True

    # iterative swap repair: feasibility first, effectiveness as tiebreak
    def distance(t: float) -> float:
        return max(0.0, constraints.min_total_s - t, t - constraints.max_total_s)

    for _ in range(200):
        t = total()
        dist = distance(t)
        if dist == 0.0:
            return True
        best = None
        for e in order:
            for old in picks[e]:
                for new in remaining[e]:
                    d_new = distance(t - old.duration_s + new.duration_s)
                    if d_new >= dist - 1e-9:
                        continue
                    # close the duration gap while giving up as little
                    # selection quality as possible; any strict progress
                    # toward the window qualifies
                    rank = (
                        profile.clip_effectiveness(old) - profile.clip_effectiveness(new),
                        d_new,
                        new.clip_id,
                        old.clip_id,
                    )
                    if best is None or rank < best[0]:
                        best = (rank, e, old, new)
        if best is None:
            return False
        _, e, old, new = best
        picks[e].remove(old)
        picks[e].append(new)
        remaining[e].remove(new)
        remaining[e].append(old)
    return distance(total()) == 0.0


def generate_session(
    profile: SubjectProfile,
    pool: list[StimulusClip],
    constraints: PlanConstraints = PlanConstraints(),
    session_id: str | None = None,
    personalized: bool = False,
    emotions: list[EmotionLabel] | None = None,
) -> SessionPlan:
    """Generate the next session plan honoring every protocol rule.

    Emotions rotate toward the least-covered ones; after a predominantly
    negative session the next one cannot be majority-negative again. Clips
    are picked by highest learned effectiveness, skipping exclusions and
    anything already shown. Total duration is fitted into the 60-70 min
    window by adding next-best or dropping lowest-effectiveness clips.
    """
    pool_by_id(pool)  # validates uniqueness
    if session_id is None:
        session_id = f"session-{len(profile.planned_sessions) + 1:03d}"

    if personalized:
        picks = {}
        for emotion in PERSONALIZED_ORDER:
            eligible = _eligible(profile, pool, emotion, constraints)
            if not eligible:
                raise PoolExhaustedError(emotion)
            picks[emotion] = eligible[:2]
        return _compose(
            session_id,
            list(PERSONALIZED_ORDER),
            picks,
            profile,
            constraints.personalized_rest_s,
            personalized=True,
        )

    need = _need_order(profile)
    need_rank = {e: i for i, e in enumerate(need)}
    eligible_cache = {e: _eligible(profile, pool, e, constraints) for e in need}

    if emotions is not None:
        for e in emotions:
            if not eligible_cache.get(EmotionLabel(e)):
                raise PoolExhaustedError(EmotionLabel(e))
        subsets = [tuple(EmotionLabel(e) for e in emotions)]
    else:
        if need and not eligible_cache[need[0]]:
            raise PoolExhaustedError(need[0])
        subsets = []
        for size in range(constraints.max_emotions, constraints.min_emotions - 1, -1):
            for combo in itertools.combinations(need, size):
                neg = sum(1 for e in combo if e in NEGATIVE_EMOTIONS)
                majority_negative = neg > len(combo) - neg
                if profile.last_session_valence == "negative" and majority_negative:
                    continue
                subsets.append(combo)

    for subset in subsets:
        if any(
            len(eligible_cache[e]) < constraints.min_clips_per_emotion for e in subset
        ):
            continue
        order = _group_order(subset, need_rank)
        picks = {e: list(eligible_cache[e][: constraints.min_clips_per_emotion]) for e in order}
        remaining = {
            e: [c for c in eligible_cache[e] if c not in picks[e]] for e in order
        }
        if _fit_duration(picks, order, remaining, profile, constraints):
            return _compose(session_id, order, picks, profile, constraints.rest_s)

    starved = [
        e for e in need if len(eligible_cache[e]) < constraints.min_clips_per_emotion
    ]
    if starved:
        raise PoolExhaustedError(starved[0])
    raise PlanError(
        f"cannot fit a {constraints.min_total_s / 60:.0f}-"
        f"{constraints.max_total_s / 60:.0f} min session from the eligible clips"
    )
