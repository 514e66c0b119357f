"""Personalized emotion-baseline pipeline.

Biosignal preprocessing, 32-sample windowed time-domain features,
from-scratch classifiers with OOB/Gini diagnostics, an adaptive
stimulus-session protocol, and a file-backed HTTP service.
"""

__version__ = "0.1.0"

from .labels import (
    BINARY_NAMES,
    CHANNELS,
    EMOTIONS,
    NEGATIVE,
    NEGATIVE_EMOTIONS,
    POSITIVE,
    POSITIVE_EMOTIONS,
    Channel,
    EmotionLabel,
)

__all__ = [
    "BINARY_NAMES",
    "CHANNELS",
    "EMOTIONS",
    "NEGATIVE",
    "NEGATIVE_EMOTIONS",
    "POSITIVE",
    "POSITIVE_EMOTIONS",
    "Channel",
    "EmotionLabel",
    "__version__",
]
