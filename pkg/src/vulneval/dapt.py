"""Pretraining-document templates and corpus emission.

CVE and notification details are flattened into fixed single-line
templates; the corpus is shuffled deterministically and written as a
90:10 train/validation pair of line-delimited text files.
"""

from __future__ import annotations

import enum
import json
import logging
import random
import re
from dataclasses import dataclass, replace
from pathlib import Path

from .cvss import CvssVector, MetricGroup, expand_to_text
from .nvd import CveRecord
from .textclean import clean_description, merge_descriptions

logger = logging.getLogger(__name__)

_WS_RE = re.compile(r"\s+")

BASE_TEMPORAL = frozenset({MetricGroup.BASE, MetricGroup.TEMPORAL})


class DocumentSource(enum.Enum):
    PUBLIC = "Public"
    ORGANIZATION = "Organization"


@dataclass(frozen=True)
class DaptDocument:
    text: str
    source: DocumentSource

    def __post_init__(self):
        if not self.text:
            raise ValueError("document text must be non-empty")


def _sentence(text: str) -> str:
    text = _WS_RE.sub(" ", text).strip()
    return text if text.endswith(".") else text + "."


def _vector_clause(vector: CvssVector | None) -> str | None:
    if vector is None or not vector:
        return None
    return "Vector: " + expand_to_text(vector, BASE_TEMPORAL, fill_missing=False)


def prepare_cve_record(record: CveRecord) -> CveRecord | None:
    """Clean and merge a record's descriptions down to one text.

    Returns None when nothing but URLs/markup was left, so callers can
    drop the record.
    """
    cleaned = [clean_description(d) for d in record.descriptions]
    cleaned = [d for d in cleaned if d]
    if not cleaned:
        logger.warning("%s: all descriptions empty after cleaning", record.cve_id)
        return None
    return replace(record, descriptions=(merge_descriptions(cleaned),))


def render_cve_document(record: CveRecord) -> DaptDocument:
    """Render the public-CVE template; optional clauses drop out entirely.

    Expects a prepared record (cleaned, descriptions merged to one); extra
    descriptions are merged defensively.
    """
    description = merge_descriptions(list(record.descriptions))
    clauses = [_sentence(f"CVE description: {description}")]
    if record.affected_product:
        if record.highest_affected_version:
            clauses.append(_sentence(
                f"Affected product: {record.affected_product} less than "
                f"{record.highest_affected_version}"
            ))
        else:
            clauses.append(_sentence(f"Affected product: {record.affected_product}"))
    if record.lowest_unaffected_version:
        clauses.append(_sentence(
            f"Unaffected version: {record.lowest_unaffected_version} and higher"
        ))
    vector_clause = _vector_clause(record.base_temporal_vector)
    if vector_clause:
        clauses.append(vector_clause)
    return DaptDocument(" ".join(clauses), DocumentSource.PUBLIC)


def render_notification_document(
    description: str, vector: CvssVector | None = None
) -> DaptDocument | None:
    """Render the organization-notification template; None when empty."""
    description = _WS_RE.sub(" ", description).strip()
    if not description:
        logger.warning("skipping notification document with empty description")
        return None
    clauses = [_sentence(f"Notification description: {description}")]
    vector_clause = _vector_clause(vector)
    if vector_clause:
        clauses.append(vector_clause)
    return DaptDocument(" ".join(clauses), DocumentSource.ORGANIZATION)


def emit_dapt_corpus(
    documents: list[DaptDocument], seed: int, out_dir: str | Path
) -> dict:
    """Shuffle deterministically, split 90:10 and write the corpus files.

    Returns the manifest, which is also written to ``manifest.json``.
    The validation share is the remainder after flooring the train share,
    so tiny corpora still get one validation document.
    """
    if not documents:
        raise ValueError("cannot emit an empty corpus")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    shuffled = list(documents)
    random.Random(seed).shuffle(shuffled)
    train_count = int(len(shuffled) * 0.9)
    train, valid = shuffled[:train_count], shuffled[train_count:]

    for name, docs in (("train.txt", train), ("valid.txt", valid)):
        (out / name).write_text(
            "".join(doc.text + "\n" for doc in docs), encoding="utf-8"
        )

    by_source = {source.value: 0 for source in DocumentSource}
    for doc in documents:
        by_source[doc.source.value] += 1
    public_texts = {d.text for d in documents if d.source is DocumentSource.PUBLIC}
    cross_source_duplicates = sum(
        1
        for d in documents
        if d.source is DocumentSource.ORGANIZATION and d.text in public_texts
    )
    manifest = {
        "train_count": len(train),
        "valid_count": len(valid),
        "seed": seed,
        "source_counts": by_source,
        "cross_source_duplicates": cross_source_duplicates,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
