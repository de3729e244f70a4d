"""Prayatul matrix construction and the five comparative measures.

A prayatul matrix tallies, instance by instance, whether a *primary* and an
*alternative* classifier are right or wrong with respect to the ground truth::

                      alternative
                      Right   Wrong
    primary  Right     BR      RW     BR+RW
             Wrong     WR      BW     WR+BW
                      BR+WR   RW+BW     N

All measures are ratios of integer combinations of the four counts.  They are
kept as exact fractions so that identities can be checked without float
tolerance; ``MeasureValue.value`` gives the double-precision quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DuplicateId, EmptyInput, IdMismatch, LengthMismatch

CELL_NAMES = ("br", "rw", "wr", "bw")


@dataclass(frozen=True)
class LabelSequence:
    """Ordered, ID-aligned labels for one source (ground truth or one model).

    ``ids`` and ``labels`` are stored as tuples of strings.  ``source`` is a
    free-form description (usually a file path) used only in error messages.
    """

    ids: tuple[str, ...]
    labels: tuple[str, ...]
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        ids = tuple(self.ids)
        labels = tuple(self.labels)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "labels", labels)
        where = self.source or "label sequence"
        if len(ids) != len(labels):
            raise LengthMismatch(f"{where}: {len(ids)} ids but {len(labels)} labels")
        if not ids:
            raise EmptyInput(f"{where}: no instances")
        if len(set(ids)) != len(ids):
            seen = set()
            for i in ids:
                if i in seen:
                    raise DuplicateId(i, self.source)
                seen.add(i)

    @classmethod
    def from_labels(cls, labels: Sequence[str], source: str | None = None) -> LabelSequence:
        """Build a sequence with positional ids ``"0", "1", ...``."""
        return cls(tuple(str(i) for i in range(len(labels))), tuple(labels), source)

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def n(self) -> int:
        return len(self.ids)

    def reorder(self, ids: Sequence[str]) -> LabelSequence:
        """Return the labels rearranged to follow ``ids`` (which must be a permutation)."""
        index = dict(zip(self.ids, self.labels))
        return LabelSequence(tuple(ids), tuple(index[i] for i in ids), self.source)


def check_aligned(a: LabelSequence, b: LabelSequence) -> None:
    """Raise unless ``a`` and ``b`` index the same instances in the same order."""
    if a.n != b.n:
        raise LengthMismatch(
            f"{a.source or 'sequence'} has {a.n} instances, {b.source or 'sequence'} has {b.n}"
        )
    if a.ids is b.ids or a.ids == b.ids:
        return
    for pos, (x, y) in enumerate(zip(a.ids, b.ids)):
        if x != y:
            raise IdMismatch(f"position {pos}: id {x!r} vs {y!r}")


@dataclass(frozen=True)
class CorrectnessVector:
    flags: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.flags)

    @property
    def right(self) -> frozenset[int]:
        return frozenset(i for i, f in enumerate(self.flags) if f)

    @property
    def wrong(self) -> frozenset[int]:
        return frozenset(i for i, f in enumerate(self.flags) if not f)


def correctness(predictions: LabelSequence, truth: LabelSequence) -> CorrectnessVector:
    check_aligned(truth, predictions)
    return CorrectnessVector(tuple(p == g for p, g in zip(predictions.labels, truth.labels)))


@dataclass(frozen=True)
class Cells:
    """Instance ids falling in each matrix cell, in input order."""

    br: tuple[str, ...] = ()
    rw: tuple[str, ...] = ()
    wr: tuple[str, ...] = ()
    bw: tuple[str, ...] = ()

    def as_dict(self) -> dict[str, list[str]]:
        return {name: list(getattr(self, name)) for name in CELL_NAMES}


@dataclass(frozen=True)
class PrayatulMatrix:
    br: int
    rw: int
    wr: int
    bw: int
    cells: Cells | None = None

    def __post_init__(self):
        for name in CELL_NAMES:
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
        if self.cells is not None:
            for name in CELL_NAMES:
                if len(getattr(self.cells, name)) != getattr(self, name):
                    raise ValueError(f"cell list {name} does not match its count")

    @property
    def n(self) -> int:
        return self.br + self.rw + self.wr + self.bw

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.br, self.rw, self.wr, self.bw)

    @property
    def primary_right(self) -> int:
        return self.br + self.rw

    @property
    def primary_wrong(self) -> int:
        return self.wr + self.bw

    @property
    def alternative_right(self) -> int:
        return self.br + self.wr

    @property
    def alternative_wrong(self) -> int:
        return self.rw + self.bw

    def without_cells(self) -> PrayatulMatrix:
        return PrayatulMatrix(self.br, self.rw, self.wr, self.bw)


def generate_prayatul_matrix(
    truth: LabelSequence,
    primary: LabelSequence,
    alternative: LabelSequence,
    keep_cells: bool = False,
) -> PrayatulMatrix:
    """Count joint right/wrong outcomes of two models in one pass over the instances."""
    check_aligned(truth, primary)
    check_aligned(truth, alternative)
    if truth.n == 0:
        raise EmptyInput("no instances")
    br = rw = wr = bw = 0
    triples = zip(truth.labels, primary.labels, alternative.labels)
    if not keep_cells:
        for g, p, q in triples:
            if p == g:
                if q == g:
                    br += 1
                else:
                    rw += 1
            elif q == g:
                wr += 1
            else:
                bw += 1
        return PrayatulMatrix(br, rw, wr, bw)

    lists: tuple[list[str], ...] = ([], [], [], [])
    for i, (g, p, q) in zip(truth.ids, triples):
        lists[(p != g) * 2 + (q != g)].append(i)
    br, rw, wr, bw = (len(x) for x in lists)
    return PrayatulMatrix(br, rw, wr, bw, Cells(*(tuple(x) for x in lists)))


def transpose(m: PrayatulMatrix) -> PrayatulMatrix:
    """Swap the roles of primary and alternative."""
    cells = None
    if m.cells is not None:
        cells = Cells(m.cells.br, m.cells.wr, m.cells.rw, m.cells.bw)
    return PrayatulMatrix(m.br, m.wr, m.rw, m.bw, cells)


# ---------------------------------------------------------------------------
# Measures


@dataclass(frozen=True)
class MeasureValue:
    """A measure value, or Undefined when its denominator is zero.

    ``exact`` holds the rational value; ``excluded`` counts folds left out of
    a mean because the measure was undefined there (0 for single matrices).
    """

    exact: Fraction | None
    excluded: int = 0

    @classmethod
    def ratio(cls, numerator: int, denominator: int) -> MeasureValue:
        if denominator == 0:
            return UNDEFINED
        return cls(Fraction(numerator, denominator))

    @property
    def defined(self) -> bool:
        return self.exact is not None

    @property
    def value(self) -> float | None:
        if self.exact is None:
            return None
        return self.exact.numerator / self.exact.denominator

    def __repr__(self) -> str:
        if self.exact is None:
            return "MeasureValue(Undefined)"
        return f"MeasureValue({self.value!r})"


UNDEFINED = MeasureValue(None)


def comparative_deviation(m: PrayatulMatrix) -> MeasureValue:
    """(RW - WR) / (RW + WR); undefined when the models never disagree on correctness."""
    return MeasureValue.ratio(m.rw - m.wr, m.rw + m.wr)


def polarization(m: PrayatulMatrix) -> MeasureValue:
    """(BR + RW - BW) / N."""
    return MeasureValue.ratio(m.br + m.rw - m.bw, m.n)


def comparative_rightness(m: PrayatulMatrix) -> MeasureValue:
    """(BR + RW) / (BR + RW + WR)."""
    return MeasureValue.ratio(m.br + m.rw, m.br + m.rw + m.wr)


def effective_rightness(m: PrayatulMatrix) -> MeasureValue:
    """(BR + RW - WR) / (BR + RW + WR)."""
    return MeasureValue.ratio(m.br + m.rw - m.wr, m.br + m.rw + m.wr)


def effective_superiority(m: PrayatulMatrix) -> MeasureValue:
    """(BR + RW - WR) / N."""
    return MeasureValue.ratio(m.br + m.rw - m.wr, m.n)


# key, long name, function
MEASURES = (
    ("sigma_c", "comparative deviation", comparative_deviation),
    ("alpha", "polarization", polarization),
    ("xi_c", "comparative rightness", comparative_rightness),
    ("xi_e", "effective rightness", effective_rightness),
    ("phi_e", "effective superiority", effective_superiority),
)
MEASURE_KEYS = tuple(k for k, _, _ in MEASURES)
MEASURE_NAMES = {k: name for k, name, _ in MEASURES}


@dataclass(frozen=True)
class MeasureSet:
    sigma_c: MeasureValue
    alpha: MeasureValue
    xi_c: MeasureValue
    xi_e: MeasureValue
    phi_e: MeasureValue
    # None for fold means, whose values are not a function of a single matrix
    source: PrayatulMatrix | None = None

    def __getitem__(self, key: str) -> MeasureValue:
        if key not in MEASURE_KEYS:
            raise KeyError(key)
        return getattr(self, key)

    def items(self) -> Iterator[tuple[str, MeasureValue]]:
        for key in MEASURE_KEYS:
            yield key, getattr(self, key)

    def values(self) -> dict[str, float | None]:
        return {k: v.value for k, v in self.items()}


def measure_set(m: PrayatulMatrix) -> MeasureSet:
    return MeasureSet(*(fn(m) for _, _, fn in MEASURES), source=m)
