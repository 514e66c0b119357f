"""Exception taxonomy shared across the pipeline."""


class PipelineError(Exception):
    """Base class for all errors raised by this package."""


class IngestError(PipelineError):
    """Raw stream is unusable: empty, non-monotone timestamps, non-finite values."""


class ConfigError(PipelineError):
    """Invalid parameter value (filter order 0, mtry too large, bad fold count...)."""


class ScheduleError(PipelineError):
    """Session schedule is malformed (overlapping or out-of-range segments)."""


class FeatureError(PipelineError):
    """Window cannot be featurized (missing channel, wrong length)."""


class DatasetError(PipelineError):
    """Dataset construction failed (unknown clip under rank filtering, empty result)."""


class TrainError(PipelineError):
    """Training failed or did not converge.

    May carry a best-so-far model on the ``model`` attribute.
    """

    def __init__(self, message, model=None):
        super().__init__(message)
        self.model = model


class PredictError(PipelineError):
    """Prediction input does not match the trained model."""


class ValidationError(PipelineError):
    """User-supplied value out of bounds (e.g. ranking score outside 1-10)."""


class QuestionnaireError(PipelineError):
    """Initial questionnaire is missing mandatory answers."""


class MappingError(PipelineError):
    """Label cannot be mapped (Rest has no binary valence)."""


class PoolExhaustedError(PipelineError):
    """No eligible stimulus clip remains for a required emotion."""

    def __init__(self, emotion, message=None):
        self.emotion = emotion
        super().__init__(message or f"no eligible clips left for emotion {emotion!r}")


class PlanError(PipelineError):
    """A session plan violates the protocol constraints."""


class StoreError(PipelineError):
    """Persistence failure or content-hash mismatch in the file store."""
