"""Instance-level comparison of two classifiers with the prayatul matrix."""

from .baseline import Averaging, ConfusionMatrix, ConfusionSummary, baseline, confusion_matrix, summarize
from .core import (
    UNDEFINED,
    Cells,
    CorrectnessVector,
    LabelSequence,
    MeasureSet,
    MeasureValue,
    PrayatulMatrix,
    comparative_deviation,
    comparative_rightness,
    correctness,
    effective_rightness,
    effective_superiority,
    generate_prayatul_matrix,
    measure_set,
    polarization,
    transpose,
)
from .engine import (
    Aggregate,
    CompareOptions,
    ComparisonReport,
    PairReport,
    PairResult,
    aggregate,
    compare_pair,
    cross_validate,
    run_manifest,
    tournament,
)
from .errors import PrayatulError
from .ingestion import Manifest, align, load_labels, load_manifest, write_labels

__all__ = [
    "Aggregate", "Averaging", "Cells", "CompareOptions", "ComparisonReport", "ConfusionMatrix",
    "ConfusionSummary", "CorrectnessVector", "LabelSequence", "Manifest", "MeasureSet",
    "MeasureValue", "PairReport", "PairResult", "PrayatulError", "PrayatulMatrix", "UNDEFINED",
    "aggregate", "align", "baseline", "comparative_deviation", "comparative_rightness",
    "compare_pair", "confusion_matrix", "correctness", "cross_validate", "effective_rightness",
    "effective_superiority", "generate_prayatul_matrix", "load_labels", "load_manifest",
    "measure_set", "polarization", "run_manifest", "summarize", "tournament", "transpose",
    "write_labels",
]
