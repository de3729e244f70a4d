"""Pairwise comparison of one primary model against alternatives, across folds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from operator import add
from statistics import fmean
from typing import Mapping, Sequence

from .baseline import Averaging, ConfusionSummary, baseline, summarize
from .core import (
    MEASURE_KEYS,
    LabelSequence,
    MeasureSet,
    MeasureValue,
    PrayatulMatrix,
    generate_prayatul_matrix,
    measure_set,
)
from .errors import MixedPair, PrayatulError
from .ingestion import CSV, Manifest, align, load_labels

MEAN = "mean"
POOLED = "pooled"
AGGREGATION_MODES = (MEAN, POOLED)


@dataclass(frozen=True)
class CompareOptions:
    keep_cells: bool = False
    averaging: Averaging = field(default_factory=lambda: Averaging("auto"))
    aggregation: str = MEAN

    def __post_init__(self):
        if isinstance(self.averaging, str):
            object.__setattr__(self, "averaging", Averaging.parse(self.averaging))
        if self.aggregation not in AGGREGATION_MODES:
            raise ValueError(f"aggregation must be one of {AGGREGATION_MODES}")


@dataclass(frozen=True)
class PairResult:
    primary_name: str
    alternative_name: str
    fold: int
    matrix: PrayatulMatrix
    measures: MeasureSet
    primary_baseline: ConfusionSummary | None = None
    alternative_baseline: ConfusionSummary | None = None

    @property
    def pair(self) -> tuple[str, str]:
        return (self.primary_name, self.alternative_name)


@dataclass(frozen=True)
class Aggregate:
    """Fold results of one pair combined into one set of scores.

    ``matrix`` is always the elementwise sum of the fold matrices.  In mean
    mode the measures are fold means and each MeasureValue records how many
    folds were excluded as undefined; in pooled mode they are computed from
    ``matrix``.
    """

    mode: str
    folds: int
    matrix: PrayatulMatrix
    measures: MeasureSet
    primary_baseline: ConfusionSummary | None
    alternative_baseline: ConfusionSummary | None

    @property
    def excluded(self) -> dict[str, int]:
        return {k: v.excluded for k, v in self.measures.items()}


@dataclass(frozen=True)
class PairReport:
    alternative: str
    folds: tuple[PairResult, ...]
    aggregate: Aggregate


@dataclass(frozen=True)
class ComparisonReport:
    truth: str
    primary: str
    pairs: tuple[PairReport, ...]
    aggregation_mode: str
    averaging: Averaging
    keep_cells: bool = False

    @property
    def n_folds(self) -> int:
        return len(self.pairs[0].folds) if self.pairs else 0

    @property
    def per_fold(self) -> list[PairResult]:
        return [r for p in self.pairs for r in p.folds]

    @property
    def aggregated(self) -> dict[str, Aggregate]:
        return {p.alternative: p.aggregate for p in self.pairs}


def compare_pair(
    truth: LabelSequence,
    primary: LabelSequence,
    alternative: LabelSequence,
    options: CompareOptions | None = None,
    *,
    primary_name: str = "primary",
    alternative_name: str = "alternative",
    fold: int = 1,
) -> PairResult:
    options = options or CompareOptions()
    averaging = options.averaging.resolve(truth.labels)
    primary, alternative = align(truth, [primary, alternative])
    matrix = generate_prayatul_matrix(truth, primary, alternative, keep_cells=options.keep_cells)
    return PairResult(
        primary_name,
        alternative_name,
        fold,
        matrix,
        measure_set(matrix),
        baseline(truth, primary, averaging),
        baseline(truth, alternative, averaging),
    )


def _mean_measure(values: list[MeasureValue]) -> MeasureValue:
    defined = [v.exact for v in values if v.defined]
    excluded = len(values) - len(defined)
    if not defined:
        return MeasureValue(None, excluded)
    return MeasureValue(sum(defined, Fraction(0)) / len(defined), excluded)


def _mean_baseline(summaries: list[ConfusionSummary]) -> ConfusionSummary:
    return ConfusionSummary(
        fmean(s.accuracy for s in summaries),
        fmean(s.precision for s in summaries),
        fmean(s.recall for s in summaries),
        summaries[0].averaging,
    )


def _combine_baselines(summaries: list[ConfusionSummary | None], mode: str) -> ConfusionSummary | None:
    if any(s is None for s in summaries):
        return None
    if len(summaries) == 1:
        return summaries[0]
    if mode == POOLED and all(s.confusion is not None for s in summaries):
        pooled = reduce(add, (s.confusion for s in summaries))
        return summarize(pooled, summaries[0].averaging)
    return _mean_baseline(summaries)


def aggregate(fold_results: Sequence[PairResult], mode: str = MEAN) -> Aggregate:
    """Combine the fold results of a single (primary, alternative) pair."""
    if not fold_results:
        raise ValueError("nothing to aggregate")
    if mode not in AGGREGATION_MODES:
        raise ValueError(f"aggregation must be one of {AGGREGATION_MODES}")
    pairs = {r.pair for r in fold_results}
    if len(pairs) > 1:
        raise MixedPair(f"fold results span several pairs: {sorted(pairs)}")
    pooled = PrayatulMatrix(*(sum(c) for c in zip(*(r.matrix.counts for r in fold_results))))
    if mode == POOLED:
        measures = measure_set(pooled)
    else:
        measures = MeasureSet(
            *(_mean_measure([r.measures[k] for r in fold_results]) for k in MEASURE_KEYS)
        )
    return Aggregate(
        mode,
        len(fold_results),
        pooled,
        measures,
        _combine_baselines([r.primary_baseline for r in fold_results], mode),
        _combine_baselines([r.alternative_baseline for r in fold_results], mode),
    )


Fold = tuple[LabelSequence, Mapping[str, LabelSequence]]


def cross_validate(
    folds: Sequence[Fold],
    primary: str,
    alternatives: Sequence[str],
    options: CompareOptions | None = None,
    truth_name: str = "",
) -> ComparisonReport:
    """Compare ``primary`` with each alternative on every fold.

    Each fold is ``(truth, {model name: predictions})``.  ``auto`` averaging is
    resolved once over the ground-truth classes of all folds so every fold and
    model is scored the same way.  Any error aborts the whole run.
    """
    options = options or CompareOptions()
    if not alternatives:
        raise ValueError("at least one alternative is required")
    classes = set()
    for truth, _ in folds:
        classes.update(truth.labels)
    averaging = options.averaging.resolve(classes)
    resolved = CompareOptions(options.keep_cells, averaging, options.aggregation)

    pairs = []
    for alt in alternatives:
        results = []
        for k, (truth, models) in enumerate(folds, start=1):
            results.append(
                compare_pair(
                    truth,
                    models[primary],
                    models[alt],
                    resolved,
                    primary_name=primary,
                    alternative_name=alt,
                    fold=k,
                )
            )
        pairs.append(PairReport(alt, tuple(results), aggregate(results, options.aggregation)))
    return ComparisonReport(
        truth_name, primary, tuple(pairs), options.aggregation, averaging, options.keep_cells
    )


def tournament(
    truth: LabelSequence,
    primary: tuple[str, LabelSequence],
    alternatives: Sequence[tuple[str, LabelSequence]] | Mapping[str, LabelSequence],
    options: CompareOptions | None = None,
    truth_name: str = "",
) -> ComparisonReport:
    """Single-fold comparison of one primary against several alternatives."""
    if isinstance(alternatives, Mapping):
        alternatives = list(alternatives.items())
    names = [name for name, _ in alternatives]
    models = {primary[0]: primary[1], **dict(alternatives)}
    return cross_validate([(truth, models)], primary[0], names, options, truth_name)


def load_manifest_folds(manifest: Manifest, label_format: str = CSV) -> list[Fold]:
    """Load every file named by a manifest; errors name the model and fold."""
    folds = []
    for k in range(manifest.folds):
        try:
            truth = load_labels(manifest.truth[k], label_format)
        except PrayatulError as exc:
            raise _with_context(exc, "truth", k + 1) from None
        models = {}
        for name, paths in manifest.models.items():
            try:
                models[name] = load_labels(paths[k], label_format)
            except PrayatulError as exc:
                raise _with_context(exc, name, k + 1) from None
        folds.append((truth, models))
    return folds


def _with_context(exc: PrayatulError, owner: str, fold: int) -> PrayatulError:
    where = f"model {owner!r}, fold {fold}" if owner != "truth" else f"truth, fold {fold}"
    exc.args = (f"{where}: {exc}",)
    return exc


def run_manifest(
    manifest: Manifest,
    options: CompareOptions | None = None,
    label_format: str = CSV,
    truth_name: str | None = None,
) -> ComparisonReport:
    folds = load_manifest_folds(manifest, label_format)
    name = truth_name if truth_name is not None else str(manifest.path or "")
    return cross_validate(folds, manifest.primary, manifest.alternatives, options, name)
