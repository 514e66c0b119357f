from .windows import DEFAULT_WINDOW_SAMPLES, Window, WindowConfig, cut_windows, cut_windows_all
from .extract import (
    DEFAULT_FEATURE_MASK,
    FEATURE_NAMES,
    LEAK_PRONE_FEATURES,
    N_FEATURES,
    extract_features,
)
from .dataset import (
    DATASET_HEADER,
    Dataset,
    LabeledInstance,
    build_dataset,
    read_dataset_csv,
    write_dataset_csv,
)

__all__ = [
    "DEFAULT_WINDOW_SAMPLES",
    "Window",
    "WindowConfig",
    "cut_windows",
    "cut_windows_all",
    "DEFAULT_FEATURE_MASK",
    "FEATURE_NAMES",
    "LEAK_PRONE_FEATURES",
    "N_FEATURES",
    "extract_features",
    "DATASET_HEADER",
    "Dataset",
    "LabeledInstance",
    "build_dataset",
    "read_dataset_csv",
    "write_dataset_csv",
]
