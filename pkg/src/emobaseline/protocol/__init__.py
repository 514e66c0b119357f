from .clips import RECENCY_CLASSES, Ranking, StimulusClip, load_pool, pool_by_id, save_pool
from .profile import (
    EMA_WEIGHT,
    NEUTRAL_EFFECTIVENESS,
    STRIKES_TO_EXCLUDE,
    QuestionnaireAnswer,
    SubjectProfile,
    ingest_ranking,
    seed_profile,
)
from .planner import (
    PERSONALIZED_ORDER,
    ClipBlock,
    PlanConstraints,
    RestBlock,
    SessionPlan,
    generate_session,
)
from .validate import ensure_valid, validate_plan
from .convergence import (
    CONVERGED,
    DEFAULT_MIN_SCORE,
    DEFAULT_SESSION_CAP,
    DEFAULT_TARGET_MINUTES,
    MAX_ITERATIONS,
    NEED_MORE,
    ConvergenceReport,
    check_convergence,
)
from .simulate import (
    make_random_pool,
    neutral_questionnaire,
    run_simulation,
    simulated_score,
    true_tag_weights,
)

__all__ = [
    "CONVERGED",
    "ClipBlock",
    "ConvergenceReport",
    "DEFAULT_MIN_SCORE",
    "DEFAULT_SESSION_CAP",
    "DEFAULT_TARGET_MINUTES",
    "EMA_WEIGHT",
    "MAX_ITERATIONS",
    "NEED_MORE",
    "NEUTRAL_EFFECTIVENESS",
    "PERSONALIZED_ORDER",
    "PlanConstraints",
    "QuestionnaireAnswer",
    "RECENCY_CLASSES",
    "Ranking",
    "RestBlock",
    "SessionPlan",
    "STRIKES_TO_EXCLUDE",
    "StimulusClip",
    "SubjectProfile",
    "check_convergence",
    "ensure_valid",
    "generate_session",
    "ingest_ranking",
    "load_pool",
    "make_random_pool",
    "neutral_questionnaire",
    "pool_by_id",
    "run_simulation",
    "save_pool",
    "seed_profile",
    "simulated_score",
    "true_tag_weights",
    "validate_plan",
]
