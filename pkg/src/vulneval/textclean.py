"""Description cleaning and overlap-based merging for vulnerability text."""

from __future__ import annotations

import re

_URL_RE = re.compile(r"(?:(?:https?|ftp)://|www\.)\S+", re.IGNORECASE)
_MARKUP_RE = re.compile(r"<[^<>\s][^<>]*>")
_CVE_ID_RE = re.compile(r"\bCVE-\d{4}-\d{4,}\b\s*:?", re.IGNORECASE)
_CONTROL_RE = re.compile(r"[\x00-\x08\x0b-\x1f\x7f]")
_WS_RE = re.compile(r"\s+")

# Merge texts whose word overlap does not exceed this ratio; above it the
# shorter text adds nothing and the longer one is kept.
MERGE_OVERLAP_LIMIT = 0.70


def clean_description(text: str, org_mode: bool = False) -> str:
    """Strip URLs, markup, control bytes and (in org mode) CVE ids.

    Whitespace is collapsed to single spaces; output may be empty, callers
    filter degenerate descriptions themselves.
    """
    # Drop anything that does not survive a UTF-8 round trip (lone
    # surrogates from bad decodes, mostly).
    cleaned = text.encode("utf-8", "ignore").decode("utf-8", "ignore")
    cleaned = _CONTROL_RE.sub(" ", cleaned)
    cleaned = _URL_RE.sub(" ", cleaned)
    cleaned = _MARKUP_RE.sub(" ", cleaned)
    if org_mode:
        cleaned = _CVE_ID_RE.sub(" ", cleaned)
    return _WS_RE.sub(" ", cleaned).strip()


def _word_multiset(text: str) -> dict[str, int]:
    counts: dict[str, int] = {}
    for word in text.casefold().split():
        counts[word] = counts.get(word, 0) + 1
    return counts


def word_overlap(left: str, right: str) -> float:
    """Shared word multiset size over the smaller text's word count."""
    a, b = _word_multiset(left), _word_multiset(right)
    if not a or not b:
        return 0.0
    shared = sum(min(count, b.get(word, 0)) for word, count in a.items())
    return shared / min(sum(a.values()), sum(b.values()))


def _merge_pair(left: str, right: str) -> str:
    left, right = left.strip(), right.strip()
    if not left or not right:
        return left or right
    if word_overlap(left, right) <= MERGE_OVERLAP_LIMIT:
        separator = " " if left.endswith(".") else ". "
        return left + separator + right
    return left if len(left) >= len(right) else right


def merge_descriptions(descriptions: list[str]) -> str:
    """Fold cleaned descriptions left to right.

    A pair is concatenated when it overlaps at most 70%; otherwise the
    longer text wins.
    """
    if not descriptions:
        raise ValueError("merge_descriptions requires at least one description")
    merged = descriptions[0]
    for text in descriptions[1:]:
        merged = _merge_pair(merged, text)
    return merged
