"""Class-level bias analysis for data augmentation.

Quantifies per-class effects of augmentation strength (accuracy drops,
FP/FN tradeoffs, confusion growth), categorizes confused class pairs,
synthesizes class-conditional augmentation policies, and verifies the
whole mechanism on a deterministic desk-scale simulator.
"""

__version__ = "0.1.0"

from .errors import AugbiasError, FormatError, InputConsistencyError
from .records import AnnotationSet, PredictionLog, PredictionRecord
from .metrics import (
    MULTILABEL,
    ORIGINAL,
    ConfusionCurves,
    CurvePoint,
    MetricCurves,
    accuracy_drop,
    affected_classes,
    compute_all,
    confusion_rates,
    delta_fp,
    fp_fn_counts,
    group_average,
    per_class_accuracy,
    underrepresented_classes,
)
from .taxonomy import (
    CATEGORIES,
    CategoryThresholds,
    ConfusionReport,
    EmbeddingTable,
    PairScores,
    ReportConfig,
    TaxonomyTree,
    categorize_pair,
    co_occurrence,
    confusion_report,
    embed_similarity,
    iou,
    subtree_members,
    wu_palmer,
)
from .policy import (
    AugPolicy,
    baseline_remove_augmentation,
    build_policy,
    optimal_strength,
    select_intervention_classes,
)
from .augment import (
    RrcParams,
    TransformConfig,
    apply_policy,
    colorjitter,
    hflip,
    mixup,
    resize_bilinear,
    rrc_apply,
    rrc_sample,
    sample_mixup_lambda,
)
from .simulate import (
    ClassSpec,
    CoOccurrence,
    SimConfig,
    TrainerParams,
    canonical_scenario,
    crop_mask,
    generate_dataset,
    intervention_experiment,
    sweep,
    train_classifier,
)
