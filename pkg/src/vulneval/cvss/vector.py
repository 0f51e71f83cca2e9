"""CVSS vector values: parsing, canonical strings, expanded text, diffing.

A vector is an ordered metric->value mapping tied to one CVSS version.
Instances are immutable, so they are safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import registry
from .errors import (
    AmbiguousVersion,
    CvssError,
    DuplicateMetric,
    IllegalValue,
    NoMatchingVersion,
    UnknownMetric,
    UnrecognizedMetricName,
    UnrecognizedValue,
    VersionMismatch,
)
from .registry import CvssVersion, MetricGroup

ALL_GROUPS = frozenset(MetricGroup)

_PREFIX_RE = re.compile(r"^CVSS:(\d+\.\d+)/")
_SENTENCE_RE = re.compile(r"[^.]+")

# "Not Defined" is accepted as an input alias for the XXXX placeholder.
_NOT_DEFINED_ALIASES = frozenset({"XXXX", "Not Defined"})


@dataclass(frozen=True)
class CvssVector:
    """An immutable CVSS vector in canonical metric order."""

    version: CvssVersion
    entries: tuple[tuple[str, str], ...]

    @classmethod
    def build(cls, version: CvssVersion, entries: Mapping[str, str] | Iterable[tuple[str, str]]) -> "CvssVector":
        """Validate and canonically order (metric, value) pairs."""
        pairs = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        not_defined = registry.not_defined_code(version)
        seen: dict[str, str] = {}
        for abbrev, code in pairs:
            metric = registry.metric_def(version, abbrev)
            if metric is None:
                raise UnknownMetric(f"metric {abbrev!r} is not defined for CVSS {version.value}")
            if abbrev in seen:
                raise DuplicateMetric(f"metric {abbrev!r} appears more than once")
            # The not-defined sentinel is accepted for every metric: filled
            # vector text renders missing base metrics as XXXX as well.
            if code not in metric.codes and code != not_defined:
                raise IllegalValue(
                    f"value {code!r} is not legal for {abbrev} in CVSS {version.value}"
                )
            seen[abbrev] = code
        ordered = tuple(
            (m.abbrev, seen[m.abbrev])
            for m in registry.metrics_for(version)
            if m.abbrev in seen
        )
        return cls(version, ordered)

    @classmethod
    def empty(cls, version: CvssVersion) -> "CvssVector":
        return cls(version, ())

    def get(self, abbrev: str) -> str | None:
        for key, code in self.entries:
            if key == abbrev:
                return code
        return None

    def as_dict(self) -> dict[str, str]:
        return dict(self.entries)

    def keys(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def restrict(self, groups: Iterable[MetricGroup]) -> "CvssVector":
        """Entries whose metric belongs to one of ``groups``."""
        wanted = frozenset(groups)
        kept = [
            (k, v)
            for k, v in self.entries
            if registry.metric_def(self.version, k).group in wanted
        ]
        return CvssVector(self.version, tuple(kept))

    def defined_entries(self) -> tuple[tuple[str, str], ...]:
        """Entries minus the not-defined sentinel values."""
        return tuple(
            (k, v)
            for k, v in self.entries
            if not registry.is_not_defined(self.version, v)
        )

    def to_string(self) -> str:
        return canonicalize(self)

    def __str__(self) -> str:  # pragma: no cover - repr convenience
        return self.to_string()


def infer_version(keys: Iterable[str]) -> CvssVersion:
    """Highest CVSS version whose legal metric set contains all ``keys``."""
    key_set = set(keys)
    if not key_set:
        raise NoMatchingVersion("cannot infer a CVSS version from an empty key set")
    for version in registry.versions_newest_first():
        legal = {m.abbrev for m in registry.metrics_for(version)}
        if key_set <= legal:
            return version
    raise NoMatchingVersion(
        "no CVSS version matches metric keys: " + ", ".join(sorted(key_set))
    )


def _split_segments(text: str) -> list[tuple[str, str]]:
    pairs = []
    for segment in text.split("/"):
        if not segment:
            continue
        if ":" not in segment:
            raise UnknownMetric(f"malformed vector segment: {segment!r}")
        abbrev, _, code = segment.partition(":")
        pairs.append((abbrev.strip(), code.strip()))
    return pairs


def parse_vector(text: str) -> CvssVector:
    """Parse a FIRST-notation vector string.

    An explicit ``CVSS:<ver>/`` prefix pins the version; otherwise the
    highest version for which every metric and value is legal wins.
    """
    if not text or not text.strip():
        raise CvssError("empty vector string")
    body = text.strip()
    # NVD renders v2 vectors wrapped in parentheses in some feeds.
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    version: CvssVersion | None = None
    match = _PREFIX_RE.match(body)
    if match:
        version = CvssVersion.from_tag(match.group(1))
        body = body[match.end():]
    pairs = _split_segments(body)
    if not pairs:
        raise CvssError(f"vector string has no metrics: {text!r}")
    keys = [k for k, _ in pairs]
    if len(set(keys)) != len(keys):
        dupes = sorted({k for k in keys if keys.count(k) > 1})
        raise DuplicateMetric("duplicate metrics: " + ", ".join(dupes))
    if version is not None:
        return CvssVector.build(version, pairs)
    # No prefix: pick the highest version that admits every key and value.
    known_anywhere = set()
    key_candidates = []
    for candidate in registry.versions_newest_first():
        legal = {m.abbrev for m in registry.metrics_for(candidate)}
        known_anywhere |= legal
        if set(keys) <= legal:
            key_candidates.append(candidate)
    unknown = set(keys) - known_anywhere
    if unknown:
        raise UnknownMetric("unknown metrics: " + ", ".join(sorted(unknown)))
    if not key_candidates:
        raise AmbiguousVersion(
            "metric keys mix CVSS versions: " + ", ".join(sorted(set(keys)))
        )
    last_error: IllegalValue | None = None
    for candidate in key_candidates:
        try:
            return CvssVector.build(candidate, pairs)
        except IllegalValue as exc:
            last_error = exc
    raise last_error  # values fit no key-compatible version


def canonicalize(vector: CvssVector) -> str:
    """Canonical string form; v3.x carries the ``CVSS:<ver>/`` prefix."""
    segments = "/".join(f"{k}:{v}" for k, v in vector.entries)
    if vector.version.is_v3:
        return f"CVSS:{vector.version.value}/{segments}"
    return segments


def expand_to_text(
    vector: CvssVector,
    groups: Iterable[MetricGroup] = ALL_GROUPS,
    fill_missing: bool = False,
) -> str:
    """Render ``<full name> is <value name>.`` sentences in canonical order.

    With ``fill_missing``, every legal metric of the requested groups that
    is absent from the vector is rendered as ``<full name> is XXXX.``.
    """
    wanted = frozenset(groups)
    present = vector.as_dict()
    sentences = []
    for metric in registry.metrics_for(vector.version):
        if metric.group not in wanted:
            continue
        code = present.get(metric.abbrev)
        if code is None:
            if not fill_missing:
                continue
            value_name = registry.NOT_DEFINED_TEXT
        elif registry.is_not_defined(vector.version, code):
            value_name = registry.NOT_DEFINED_TEXT
        else:
            value_name = metric.value_name(code)
        sentences.append(f"{metric.full_name} is {value_name}.")
    return " ".join(sentences)


def _resolve_name_value(
    version: CvssVersion, name: str, value: str
) -> tuple[str, str] | None:
    metric = registry.metric_by_name(version, name)
    if metric is None:
        return None
    if value in _NOT_DEFINED_ALIASES:
        return metric.abbrev, registry.not_defined_code(version)
    code = metric.code_for(value)
    if code is None:
        return None
    return metric.abbrev, code


def parse_expanded_text(text: str, version: CvssVersion | None = None) -> CvssVector:
    """Parse ``<full name> is <value>.`` sentences back into a vector.

    Without an explicit ``version`` the highest version that recognizes
    every name and value is used; in the pipeline the version always comes
    from the surrounding evaluation context, so pass it when known.
    """
    sentences = [s.strip() for s in _SENTENCE_RE.findall(text)]
    sentences = [s for s in sentences if s]
    parsed: list[tuple[str, str]] = []
    for sentence in sentences:
        if " is " not in sentence:
            raise UnrecognizedMetricName(f"not a metric sentence: {sentence!r}")
        name, _, value = sentence.partition(" is ")
        parsed.append((name.strip(), value.strip()))

    candidates = (version,) if version else registry.versions_newest_first()
    failure: CvssError | None = None
    for candidate in candidates:
        pairs = []
        ok = True
        for name, value in parsed:
            resolved = _resolve_name_value(candidate, name, value)
            if resolved is None:
                ok = False
                if registry.metric_by_name(candidate, name) is None:
                    failure = UnrecognizedMetricName(
                        f"unknown metric name for CVSS {candidate.value}: {name!r}"
                    )
                else:
                    failure = UnrecognizedValue(
                        f"unknown value {value!r} for {name!r} in CVSS {candidate.value}"
                    )
                break
            pairs.append(resolved)
        if not ok:
            continue
        try:
            return CvssVector.build(candidate, pairs)
        except DuplicateMetric:
            raise
        except CvssError as exc:  # pragma: no cover - build re-checks legality
            failure = exc
    assert failure is not None
    raise failure


def diff_environmental(evaluation: CvssVector, notification: CvssVector) -> CvssVector:
    """Entries of ``evaluation`` whose (metric, value) pair the notification
    does not already carry.

    Not-defined sentinel values are treated the same as absent entries on
    both sides, since they are textual placeholders rather than data.
    """
    if evaluation.version is not notification.version:
        raise VersionMismatch(
            f"cannot diff CVSS {evaluation.version.value} against "
            f"{notification.version.value}"
        )
    have = set(notification.defined_entries())
    kept = [pair for pair in evaluation.defined_entries() if pair not in have]
    return CvssVector(evaluation.version, tuple(kept))
