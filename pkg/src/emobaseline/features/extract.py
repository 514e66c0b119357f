"""The 17 time-domain features computed per 32-sample window.

All features are means, sample standard deviations, sums of squares, and
successive-difference statistics -- cheap enough for wearable firmware.
"""

from __future__ import annotations

import numpy as np

from ..errors import FeatureError
from ..labels import Channel
from .windows import Window

#: Feature names in canonical (report/CSV) order.
FEATURE_NAMES = (
    "HRV_mean",
    "HRV_std",
    "BR_mean",
    "BR_std",
    "HRP_mean",
    "HRP_std",
    "BR_ssq",
    "GSR_ssq",
    "HRV_mean_diff",
    "HRV_std_diff",
    "GSR_mean",
    "GSR_std",
    "SKT_mean",
    "HRV_mean_diff_sq",
    "HRV_std_diff_sq",
    "HR_mean",
    "HR_std",
)

N_FEATURES = len(FEATURE_NAMES)

#: Features disabled by default: SKT tracks elapsed session time and leaks the target.
LEAK_PRONE_FEATURES = ("SKT_mean",)
DEFAULT_FEATURE_MASK = tuple(f for f in FEATURE_NAMES if f not in LEAK_PRONE_FEATURES)


def _std(x: np.ndarray) -> float:
    return float(np.std(x, ddof=1)) if x.size > 1 else 0.0


def extract_features(window: Window) -> np.ndarray:
    """Compute all 17 features of one window, in FEATURE_NAMES order.

    Successive differences d[i] = x[i+1] - x[i] have length w-1; the
    diff-squared statistics are computed over d**2; sums of squares run over
    the raw (session-normalized) window values.
    """
    missing = [ch.value for ch in Channel if ch not in window.channels]
    if missing:
        raise FeatureError(f"window is missing channels: {', '.join(missing)}")
    w = window.w
    for ch, vals in window.channels.items():
        if vals.size != w:
            raise FeatureError(f"channel {ch.value} has {vals.size} samples, expected {w}")

    hr = window.channels[Channel.HR]
    hrv = window.channels[Channel.HRV]
    hrp = window.channels[Channel.HRP]
    br = window.channels[Channel.BR]
    gsr = window.channels[Channel.GSR]
    skt = window.channels[Channel.SKT]

    d = np.diff(hrv)
    d_sq = d * d

    feats = np.array(
        [
            np.mean(hrv),
            _std(hrv),
            np.mean(br),
            _std(br),
            np.mean(hrp),
            _std(hrp),
            np.sum(br * br),
            np.sum(gsr * gsr),
            np.mean(d),
            _std(d),
            np.mean(gsr),
            _std(gsr),
            np.mean(skt),
            np.mean(d_sq),
            _std(d_sq),
            np.mean(hr),
            _std(hr),
        ],
        dtype=np.float64,
    )
    if not np.all(np.isfinite(feats)):
        bad = [FEATURE_NAMES[i] for i in np.nonzero(~np.isfinite(feats))[0]]
        raise FeatureError(f"non-finite features: {', '.join(bad)}")
    return feats
