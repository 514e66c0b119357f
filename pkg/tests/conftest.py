import numpy as np
import pytest

from emobaseline.eval.synthetic import (
    SyntheticSpec,
    block_schedule,
    generate_synthetic_subject,
)
from emobaseline.features.dataset import Dataset, LabeledInstance
from emobaseline.features.extract import FEATURE_NAMES
from emobaseline.labels import Channel, EmotionLabel
from emobaseline.signal.ops import label_stream, preprocess_session
from emobaseline.signal.series import TimeSeries


def synth_signals(
    n_sessions=6,
    emotion_block_s=192,
    separability=0.6,
    seed=5,
    skt_mode="noise",
    trim_s=0.0,
    rotate=False,
):
    """In-memory synthetic corpus: generate -> preprocess, no file round trip."""
    spec = SyntheticSpec.gaussian(separability=separability, seed=seed, skt_mode=skt_mode)
    schedules = block_schedule(
        n_sessions=n_sessions, emotion_block_s=emotion_block_s, rest_block_s=60,
        rotate=rotate,
    )
    subject = generate_synthetic_subject(spec, schedules, seed=seed)
    signal_sets = []
    for schedule in schedules:
        streams = [
            s for device in subject.recordings[schedule.session_id].values() for s in device
        ]
        signal_sets.append(preprocess_session(streams, schedule, trim_s=trim_s))
    return signal_sets


@pytest.fixture(scope="session")
def small_corpus():
    """~180 instances across 6 sessions, moderate separability."""
    return synth_signals(n_sessions=6, emotion_block_s=192, separability=0.6, seed=5)


@pytest.fixture(scope="session")
def small_dataset(small_corpus):
    from emobaseline.pipeline import dataset_from_signals

    return dataset_from_signals(small_corpus, w=32)


def toy_dataset(X, y, mask_size=None):
    """Wrap a plain (X, y) matrix into a Dataset by padding to 17 features."""
    X = np.asarray(X, dtype=np.float64)
    n, f = X.shape
    mask = FEATURE_NAMES[:f]
    instances = []
    for i in range(n):
        full = np.zeros(len(FEATURE_NAMES))
        full[:f] = X[i]
        instances.append(
            LabeledInstance(
                features=full,
                label=EmotionLabel(int(y[i])),
                session_id="toy",
                window_start_s=float(i),
            )
        )
    return Dataset(instances=instances, feature_mask=mask)


def make_grid(n_seconds, session_id="s", seed=0, constant=None):
    """Six 1 Hz channels on t = 0..n_seconds-1, random or constant values."""
    rng = np.random.default_rng(seed)
    t = np.arange(n_seconds, dtype=np.float64) * 1000.0
    streams = []
    for ch in Channel:
        vals = (
            np.full(n_seconds, float(constant))
            if constant is not None
            else rng.normal(size=n_seconds)
        )
        streams.append(TimeSeries(channel=ch, timestamps_ms=t, values=vals))
    return streams
