"""Scoring drafts against gold evaluations.

ROUGE-L for the free-text comments, micro-F1 for category/justification,
and per-environmental-metric micro-F1 with confusion matrices for
vectors, where "N/A" (metric not applicable to the governing version)
and "XXXX" (left undefined) are first-class labels.
"""

from __future__ import annotations

import csv
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Sequence

from .cvss import CvssVector, MetricGroup, metrics_for, is_not_defined

NOT_APPLICABLE = "N/A"
UNDEFINED = "XXXX"

_TERMINAL_PUNCT = re.compile(r"^[\W_]+|[\W_]+$")


class LengthMismatch(ValueError):
    pass


def _require_paired(predictions: Sequence, gold: Sequence) -> None:
    if len(predictions) != len(gold):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(gold)} gold labels"
        )


def rouge_words(text: str) -> list[str]:
    """ROUGE-L word normalizer: lowercase, whitespace split, strip
    punctuation hugging word boundaries."""
    words = []
    for token in text.casefold().split():
        token = _TERMINAL_PUNCT.sub("", token)
        if token:
            words.append(token)
    return words


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate: str, reference: str) -> float:
    """Word-level LCS F1 (beta = 1).

    Two empty texts agree perfectly (1.0); empty against non-empty is 0.
    """
    cand, ref = rouge_words(candidate), rouge_words(reference)
    if not cand and not ref:
        return 1.0
    if not cand or not ref:
        return 0.0
    lcs = _lcs_length(cand, ref)
    if lcs == 0:
        return 0.0
    precision = lcs / len(cand)
    recall = lcs / len(ref)
    return 2 * precision * recall / (precision + recall)


def micro_f1(predictions: Sequence[Hashable], gold: Sequence[Hashable]) -> float:
    """Micro-averaged F1 over the label set.

    Counts TP/FP/FN per label and aggregates before the harmonic mean;
    for single-label multiclass input this equals accuracy.
    """
    _require_paired(predictions, gold)
    if not gold:
        return 0.0
    tp = fp = fn = 0
    labels = set(predictions) | set(gold)
    for label in labels:
        for p, g in zip(predictions, gold):
            if p == label and g == label:
                tp += 1
            elif p == label:
                fp += 1
            elif g == label:
                fn += 1
    denominator = 2 * tp + fp + fn
    return (2 * tp / denominator) if denominator else 0.0


@dataclass
class ConfusionMatrix:
    """Gold-by-predicted counts for one metric."""

    counts: Counter = field(default_factory=Counter)

    def add(self, gold_label: str, predicted_label: str) -> None:
        self.counts[(gold_label, predicted_label)] += 1

    @property
    def labels(self) -> list[str]:
        seen = {label for pair in self.counts for label in pair}
        return sorted(seen)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def gold_count(self, label: str) -> int:
        return sum(n for (g, _), n in self.counts.items() if g == label)

    def as_table(self) -> dict:
        labels = self.labels
        return {
            "labels": labels,
            "rows": [
                [self.counts.get((g, p), 0) for p in labels] for g in labels
            ],
        }

    def micro_f1(self) -> float:
        correct = sum(n for (g, p), n in self.counts.items() if g == p)
        return correct / self.total if self.total else 0.0


def _vector_label(vector: CvssVector | None, abbrev: str, applicable: bool) -> str:
    if not applicable:
        return NOT_APPLICABLE
    if vector is None:
        return UNDEFINED
    code = vector.get(abbrev)
    if code is None or is_not_defined(vector.version, code):
        return UNDEFINED
    for metric in metrics_for(vector.version):
        if metric.abbrev == abbrev:
            return metric.value_name(code) or UNDEFINED
    return UNDEFINED


def _environmental_rows(versions) -> list[tuple[str, dict]]:
    """Report rows keyed by metric display name, newest version first;
    shared names (CR/IR/AR) collapse into one row."""
    rows: dict[str, dict] = {}
    for version in sorted(versions, reverse=True):
        for metric in metrics_for(version):
            if metric.group is not MetricGroup.ENVIRONMENTAL:
                continue
            rows.setdefault(metric.full_name, {})[version] = metric.abbrev
    return list(rows.items())


def vector_component_scores(
    predictions: Sequence[CvssVector | None],
    gold: Sequence[CvssVector | None],
) -> dict[str, ConfusionMatrix]:
    """Per-environmental-metric confusion matrices over paired vectors.

    The governing version of a pair is the gold vector's (prediction's as
    a fallback); metrics foreign to that version count as N/A on both
    sides.  Pairs with no vector on either side are skipped.
    """
    _require_paired(predictions, gold)
    pairs = []
    versions = set()
    for predicted, expected in zip(predictions, gold):
        governing = expected.version if expected else (
            predicted.version if predicted else None
        )
        if governing is None:
            continue
        pairs.append((_coerce(predicted, governing), expected, governing))
        versions.add(governing)

    matrices: dict[str, ConfusionMatrix] = {}
    for name, by_version in _environmental_rows(versions):
        matrix = ConfusionMatrix()
        for predicted, expected, governing in pairs:
            abbrev = by_version.get(governing)
            applicable = abbrev is not None
            matrix.add(
                _vector_label(expected, abbrev, applicable),
                _vector_label(predicted, abbrev, applicable),
            )
        matrices[name] = matrix
    return matrices


def _coerce(vector: CvssVector | None, version) -> CvssVector | None:
    """Reissue a prediction under the governing version; a prediction that
    cannot be expressed there counts as having no usable entries."""
    if vector is None or vector.version is version:
        return vector
    try:
        return CvssVector.build(version, list(vector.entries))
    except Exception:
        return None


def whole_vector_match_rate(
    predictions: Sequence[CvssVector | None], gold: Sequence[CvssVector | None]
) -> float | None:
    """Exact-match rate of the environmental entries, over pairs where the
    gold evaluation carries a vector."""
    _require_paired(predictions, gold)
    env = {MetricGroup.ENVIRONMENTAL}
    relevant = [(p, g) for p, g in zip(predictions, gold) if g is not None]
    if not relevant:
        return None
    matches = sum(
        1 for p, g in relevant
        if p is not None
        and _coerce(p, g.version) is not None
        and _coerce(p, g.version).restrict(env).defined_entries()
        == g.restrict(env).defined_entries()
    )
    return matches / len(relevant)


@dataclass
class MetricReport:
    rouge_l_internal_comment: float | None = None
    rouge_l_customer_comment: float | None = None
    micro_f1_category: float | None = None
    micro_f1_justification: float | None = None
    vector_metric_f1: dict[str, float] = field(default_factory=dict)
    vector_metric_support: dict[str, int] = field(default_factory=dict)
    confusion: dict[str, dict] = field(default_factory=dict)
    whole_vector_match: float | None = None
    pair_count: int = 0

    def to_json(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "rouge_l": {
                "internal_comment": self.rouge_l_internal_comment,
                "customer_comment": self.rouge_l_customer_comment,
            },
            "micro_f1": {
                "category": self.micro_f1_category,
                "justification": self.micro_f1_justification,
            },
            "vector": {
                "per_metric_micro_f1": self.vector_metric_f1,
                "per_metric_support": self.vector_metric_support,
                "whole_vector_match": self.whole_vector_match,
                "confusion": self.confusion,
            },
        }


def build_report(
    *,
    internal_pairs: Sequence[tuple[str, str]],
    customer_pairs: Sequence[tuple[str, str]],
    category_pairs: Sequence[tuple[str, str]],
    justification_pairs: Sequence[tuple[str, str]],
    vector_pairs: Sequence[tuple[CvssVector | None, CvssVector | None]],
) -> MetricReport:
    """Assemble the full report from (prediction, gold) pairs."""
    report = MetricReport(pair_count=len(category_pairs))

    def mean(values):
        return sum(values) / len(values) if values else None

    report.rouge_l_internal_comment = mean([rouge_l(p, g) for p, g in internal_pairs])
    report.rouge_l_customer_comment = mean([rouge_l(p, g) for p, g in customer_pairs])
    if category_pairs:
        report.micro_f1_category = micro_f1(*zip(*category_pairs))
    if justification_pairs:
        report.micro_f1_justification = micro_f1(*zip(*justification_pairs))
    if vector_pairs:
        predictions = [p for p, _ in vector_pairs]
        expected = [g for _, g in vector_pairs]
        matrices = vector_component_scores(predictions, expected)
        for name, matrix in matrices.items():
            report.vector_metric_f1[name] = matrix.micro_f1()
            report.vector_metric_support[name] = matrix.total
            report.confusion[name] = matrix.as_table()
        report.whole_vector_match = whole_vector_match_rate(predictions, expected)
    return report


def emit_report(report: MetricReport, out_dir: str | Path) -> tuple[Path, Path]:
    """Write report.json and a per-metric CSV; deterministic output."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "report.json"
    json_path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    csv_path = out / "vector_metrics.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["metric", "micro_f1", "support"])
        for name in report.vector_metric_f1:
            writer.writerow([
                name,
                f"{report.vector_metric_f1[name]:.6f}",
                report.vector_metric_support[name],
            ])
    return json_path, csv_path
