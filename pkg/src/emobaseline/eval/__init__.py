from .metrics import (
    ConfusionMatrix,
    binarize_dataset,
    binarize_labels,
    binary_label_names,
)
from .crossval import EvalReport, cross_validate, oob_evaluate
from .experiments import (
    ClassifierComparison,
    SktAblation,
    SweepPoint,
    ablation_skt,
    compare_classifiers,
    sweep_text,
    window_sweep,
)
from .synthetic import (
    DEVICE_CHANNELS,
    TABLE_SEGMENT_LENGTHS,
    SyntheticSpec,
    SyntheticSubject,
    block_schedule,
    generate_synthetic_subject,
    protocol_schedule,
    table_shape_schedule,
)

__all__ = [
    "ConfusionMatrix",
    "EvalReport",
    "ClassifierComparison",
    "SktAblation",
    "SweepPoint",
    "SyntheticSpec",
    "SyntheticSubject",
    "DEVICE_CHANNELS",
    "TABLE_SEGMENT_LENGTHS",
    "ablation_skt",
    "binarize_dataset",
    "binarize_labels",
    "binary_label_names",
    "block_schedule",
    "compare_classifiers",
    "cross_validate",
    "generate_synthetic_subject",
    "oob_evaluate",
    "protocol_schedule",
    "sweep_text",
    "table_shape_schedule",
    "window_sweep",
]
