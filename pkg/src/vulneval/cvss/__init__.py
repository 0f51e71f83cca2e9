"""CVSS vector representation layer: parse, render, diff and score."""

from .errors import (
    AmbiguousVersion,
    CvssError,
    DuplicateMetric,
    IllegalValue,
    MissingBaseMetric,
    NoMatchingVersion,
    UnknownMetric,
    UnrecognizedMetricName,
    UnrecognizedValue,
    VersionMismatch,
)
from .registry import (
    NOT_DEFINED_TEXT,
    CvssVersion,
    MetricDef,
    MetricGroup,
    is_not_defined,
    metric_by_name,
    metric_def,
    metrics_for,
    not_defined_code,
)
from .scoring import ScoreBundle, score
from .vector import (
    ALL_GROUPS,
    CvssVector,
    canonicalize,
    diff_environmental,
    expand_to_text,
    infer_version,
    parse_expanded_text,
    parse_vector,
)

__all__ = [
    "ALL_GROUPS",
    "AmbiguousVersion",
    "CvssError",
    "CvssVector",
    "CvssVersion",
    "DuplicateMetric",
    "IllegalValue",
    "MetricDef",
    "MetricGroup",
    "MissingBaseMetric",
    "NOT_DEFINED_TEXT",
    "NoMatchingVersion",
    "ScoreBundle",
    "UnknownMetric",
    "UnrecognizedMetricName",
    "UnrecognizedValue",
    "VersionMismatch",
    "canonicalize",
    "diff_environmental",
    "expand_to_text",
    "infer_version",
    "is_not_defined",
    "metric_by_name",
    "metric_def",
    "metrics_for",
    "not_defined_code",
    "parse_expanded_text",
    "parse_vector",
    "score",
]
