"""Evaluation machinery: classification reports, Fleiss' kappa, raw agreement,
Landis-Koch interpretation and majority-vote label resolution."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence, TypeVar

from .corpus import CLASS_ORDER, PolarityLabel
from .errors import EvaluationError

T = TypeVar("T", bound=Hashable)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int

    def to_dict(self) -> dict[str, float | int]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
        }


@dataclass(frozen=True)
class ClassificationReport:
    """Per-class precision/recall/F1 plus micro, macro and overall scores.

    ``micro_f1`` equals accuracy for single-label multi-class input;
    ``macro_f1`` is the unweighted mean of per-class F1 over the classes
    present in the gold labels; ``overall_score`` is exactly their average.
    Zero denominators yield 0 throughout.
    """

    per_class: Mapping[PolarityLabel, ClassMetrics]
    micro_f1: float
    macro_f1: float
    overall_score: float

    def to_dict(self) -> dict:
        return {
            "per_class": {label.value: m.to_dict() for label, m in self.per_class.items()},
            "micro_f1": self.micro_f1,
            "macro_f1": self.macro_f1,
            "overall_score": self.overall_score,
        }


def _coerce_labels(values: Sequence, side: str) -> list[PolarityLabel]:
    labels = []
    for index, value in enumerate(values):
        try:
            labels.append(PolarityLabel(value))
        except ValueError:
            raise EvaluationError(
                f"{side}[{index}] is {value!r}, not a polarity label"
            ) from None
    return labels


def classification_report(
    gold: Sequence[PolarityLabel | str], predicted: Sequence[PolarityLabel | str]
) -> ClassificationReport:
    """Score predictions against gold labels.

    Raises EvaluationError on empty input or length mismatch.
    """
    if len(gold) != len(predicted):
        raise EvaluationError(
            f"gold and predicted lengths differ: {len(gold)} vs {len(predicted)}"
        )
    if not gold:
        raise EvaluationError("cannot evaluate empty label lists")
    gold_labels = _coerce_labels(gold, "gold")
    pred_labels = _coerce_labels(predicted, "predicted")

    gold_counts = Counter(gold_labels)
    pred_counts = Counter(pred_labels)
    tp = Counter(g for g, p in zip(gold_labels, pred_labels) if g == p)

    per_class: dict[PolarityLabel, ClassMetrics] = {}
    observed = [c for c in CLASS_ORDER if gold_counts[c] or pred_counts[c]]
    for label in observed:
        hits = tp[label]
        precision = hits / pred_counts[label] if pred_counts[label] else 0.0
        recall = hits / gold_counts[label] if gold_counts[label] else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = ClassMetrics(precision, recall, f1, gold_counts[label])

    correct = sum(tp.values())
    micro_f1 = correct / len(gold_labels)  # = global-count F1 for single-label input
    in_gold = [c for c in CLASS_ORDER if gold_counts[c]]
    macro_f1 = sum(per_class[c].f1 for c in in_gold) / len(in_gold)
    return ClassificationReport(
        per_class=per_class,
        micro_f1=micro_f1,
        macro_f1=macro_f1,
        overall_score=(micro_f1 + macro_f1) / 2,
    )


@dataclass(frozen=True)
class RatingMatrix:
    """Items x categories table of rater counts, a fixed ``raters`` per item."""

    counts: tuple[tuple[int, ...], ...]
    raters: int

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(tuple(row) for row in self.counts))
        if self.raters < 2:
            raise ValueError("a rating matrix needs at least 2 raters")
        if not self.counts:
            raise ValueError("a rating matrix needs at least 1 item")
        categories = len(self.counts[0])
        if categories < 2:
            raise ValueError("a rating matrix needs at least 2 categories")
        for index, row in enumerate(self.counts):
            if len(row) != categories:
                raise ValueError(f"row {index} has {len(row)} categories, expected {categories}")
            if any(c < 0 for c in row):
                raise ValueError(f"row {index} contains a negative count")
            if sum(row) != self.raters:
                raise ValueError(
                    f"row {index} sums to {sum(row)}, expected {self.raters} raters"
                )

    @property
    def items(self) -> int:
        return len(self.counts)

    @property
    def categories(self) -> int:
        return len(self.counts[0])

    @classmethod
    def from_label_rows(
        cls, rows: Iterable[Sequence[Hashable]], categories: Sequence[Hashable] | None = None
    ) -> "RatingMatrix":
        """Aggregate per-item rater labels into a count matrix.

        Category columns follow ``categories`` when given, else the sorted
        distinct labels. A single observed category is padded with one unused
        column so the degenerate all-agree matrix stays representable (kappa is
        undefined there regardless).
        """
        rows = [list(row) for row in rows]
        if not rows:
            raise ValueError("no rating rows given")
        raters = len(rows[0])
        if categories is None:
            seen = {label for row in rows for label in row}
            cats = sorted(seen, key=repr)
            if len(cats) == 1:
                cats.append(None)  # placeholder column, never used by a rater
        else:
            cats = list(categories)
        column = {category: index for index, category in enumerate(cats)}
        counts = []
        for index, row in enumerate(rows):
            if len(row) != raters:
                raise ValueError(f"item {index} has {len(row)} ratings, expected {raters}")
            tally = [0] * len(cats)
            for label in row:
                if label not in column:
                    raise ValueError(f"item {index}: label {label!r} not in category list")
                tally[column[label]] += 1
            counts.append(tuple(tally))
        return cls(counts=tuple(counts), raters=raters)


def fleiss_kappa(matrix: RatingMatrix) -> float | None:
    """Fleiss' kappa for the matrix, or None when chance agreement is exactly 1.

    kappa = (P_observed - P_expected) / (1 - P_expected), with the observed
    term averaged over items and the expected term from squared category
    margins. Internally exact (rational arithmetic), returned as float.
    """
    r = matrix.raters
    n_items = matrix.items
    observed_sum = sum(sum(c * c for c in row) - r for row in matrix.counts)
    p_observed = Fraction(observed_sum, n_items * r * (r - 1))
    column_totals = [sum(row[j] for row in matrix.counts) for j in range(matrix.categories)]
    p_expected = sum(Fraction(t, n_items * r) ** 2 for t in column_totals)
    if p_expected == 1:
        return None  # all mass in one category: kappa is undefined
    return float((p_observed - p_expected) / (1 - p_expected))


def raw_agreement(matrix: RatingMatrix) -> float:
    """Proportion of items on which all raters chose the same category."""
    unanimous = sum(1 for row in matrix.counts if max(row) == matrix.raters)
    return unanimous / matrix.items


#: Landis-Koch bands for kappa >= 0, lower-exclusive / upper-inclusive.
_LANDIS_KOCH_BANDS: tuple[tuple[float, str], ...] = (
    (0.20, "slight"),
    (0.40, "fair"),
    (0.60, "moderate"),
    (0.80, "substantial"),
    (1.0, "almost perfect"),
)


def landis_koch(kappa: float) -> str:
    """Qualitative band for a kappa in [-1, 1]."""
    if not -1.0 <= kappa <= 1.0:
        raise ValueError(f"kappa must be in [-1, 1], got {kappa}")
    if kappa < 0.0:
        return "poor"
    for upper, band in _LANDIS_KOCH_BANDS:
        if kappa <= upper:
            return band
    return "almost perfect"  # unreachable; kappa <= 1 handled above


@dataclass(frozen=True)
class AgreementResult:
    """Kappa with its raw-agreement companion and Landis-Koch interpretation."""

    kappa: float | None
    raw_agreement: float
    interpretation: str

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "raw_agreement": self.raw_agreement,
            "interpretation": self.interpretation,
        }


def evaluate_agreement(matrix: RatingMatrix) -> AgreementResult:
    kappa = fleiss_kappa(matrix)
    interpretation = "undefined" if kappa is None else landis_koch(kappa)
    return AgreementResult(
        kappa=kappa, raw_agreement=raw_agreement(matrix), interpretation=interpretation
    )


class _Unresolved:
    """Sentinel for majority votes without a strict majority."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNRESOLVED"


UNRESOLVED = _Unresolved()


def majority_vote(ratings: Sequence[T]) -> T | _Unresolved:
    """The strict-majority label among ratings, or UNRESOLVED if none exists."""
    if not ratings:
        raise EvaluationError("cannot take a majority vote over an empty rating list")
    if len(ratings) < 2:
        raise EvaluationError("majority vote needs at least 2 ratings")
    (label, count), = Counter(ratings).most_common(1)
    return label if count * 2 > len(ratings) else UNRESOLVED
