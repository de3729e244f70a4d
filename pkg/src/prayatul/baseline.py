"""Single-model confusion matrix scores: accuracy, precision, recall."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import LabelSequence, check_aligned
from .errors import UnknownPositiveClass


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows are true classes, columns predicted classes, both in sorted order."""

    classes: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return sum(map(sum, self.counts))

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(len(self.classes)))

    def count(self, true_label: str, predicted: str) -> int:
        return self.counts[self.classes.index(true_label)][self.classes.index(predicted)]

    def __add__(self, other: ConfusionMatrix) -> ConfusionMatrix:
        classes = tuple(sorted(set(self.classes) | set(other.classes)))
        grid = {(a, b): 0 for a in classes for b in classes}
        for cm in (self, other):
            for i, a in enumerate(cm.classes):
                for j, b in enumerate(cm.classes):
                    grid[a, b] += cm.counts[i][j]
        return ConfusionMatrix(classes, tuple(tuple(grid[a, b] for b in classes) for a in classes))


def confusion_matrix(truth: LabelSequence, predictions: LabelSequence) -> ConfusionMatrix:
    check_aligned(truth, predictions)
    classes = tuple(sorted(set(truth.labels) | set(predictions.labels)))
    index = {c: i for i, c in enumerate(classes)}
    grid = [[0] * len(classes) for _ in classes]
    for g, p in zip(truth.labels, predictions.labels):
        grid[index[g]][index[p]] += 1
    return ConfusionMatrix(classes, tuple(map(tuple, grid)))


@dataclass(frozen=True)
class Averaging:
    """How precision and recall are reduced to one number.

    ``mode`` is ``"binary"`` (with ``positive`` set), ``"macro"``, ``"micro"``
    or ``"auto"``.  ``auto`` is resolved against the ground-truth classes with
    :meth:`resolve` before use.
    """

    mode: str
    positive: str | None = None

    @classmethod
    def parse(cls, text: str) -> Averaging:
        text = text.strip()
        if text in ("macro", "micro", "auto"):
            return cls(text)
        if text.startswith("binary:") and text[len("binary:"):].strip():
            return cls("binary", text[len("binary:"):].strip())
        raise ValueError(f"averaging must be binary:<class>, macro, micro or auto; got {text!r}")

    def resolve(self, truth_classes: Iterable[str]) -> Averaging:
        """Pick binary (greatest class positive) for <= 2 true classes, macro otherwise."""
        if self.mode != "auto":
            return self
        classes = sorted(set(truth_classes))
        if len(classes) <= 2:
            return Averaging("binary", classes[-1])
        return Averaging("macro")

    def __str__(self) -> str:
        if self.mode == "binary":
            return f"binary:{self.positive}"
        return self.mode


@dataclass(frozen=True)
class ConfusionSummary:
    accuracy: float
    precision: float
    recall: float
    averaging: Averaging
    confusion: ConfusionMatrix | None = None


def _share(num: int, den: int) -> Fraction:
    # zero-support classes score 0 rather than being dropped
    return Fraction(num, den) if den else Fraction(0)


def _float(x: Fraction) -> float:
    return x.numerator / x.denominator


def summarize(cm: ConfusionMatrix, averaging: Averaging | str = "macro") -> ConfusionSummary:
    if isinstance(averaging, str):
        averaging = Averaging.parse(averaging)
    averaging = averaging.resolve(cm.classes)
    k = len(cm.classes)
    n = cm.n
    accuracy = cm.trace / n
    col = [sum(cm.counts[i][j] for i in range(k)) for j in range(k)]
    row = [sum(r) for r in cm.counts]
    if averaging.mode == "binary":
        if averaging.positive not in cm.classes:
            raise UnknownPositiveClass(averaging.positive, cm.classes)
        c = cm.classes.index(averaging.positive)
        tp = cm.counts[c][c]
        precision = _share(tp, col[c])
        recall = _share(tp, row[c])
    elif averaging.mode == "macro":
        precision = sum((_share(cm.counts[i][i], col[i]) for i in range(k)), Fraction(0)) / k
        recall = sum((_share(cm.counts[i][i], row[i]) for i in range(k)), Fraction(0)) / k
    elif averaging.mode == "micro":
        precision = recall = Fraction(cm.trace, n)
    else:
        raise ValueError(f"unknown averaging mode {averaging.mode!r}")
    return ConfusionSummary(accuracy, _float(precision), _float(recall), averaging, cm)


def baseline(truth: LabelSequence, predictions: LabelSequence,
             averaging: Averaging | str = "auto") -> ConfusionSummary:
    """Confusion matrix and summary for one model; ``auto`` resolves on the true classes."""
    if isinstance(averaging, str):
        averaging = Averaging.parse(averaging)
    averaging = averaging.resolve(truth.labels)
    return summarize(confusion_matrix(truth, predictions), averaging)
