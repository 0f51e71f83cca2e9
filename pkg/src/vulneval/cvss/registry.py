"""Metric tables for CVSS v2, v3.0 and v3.1.

Abbreviations, display names, legal values and the canonical ordering all
follow the FIRST specification documents.  v3.0 and v3.1 share one metric
table; they differ only in scoring constants (see ``scoring``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import NoMatchingVersion


@enum.unique
class CvssVersion(enum.Enum):
    """Supported CVSS format versions, orderable from oldest to newest."""

    V2 = "2.0"
    V3_0 = "3.0"
    V3_1 = "3.1"

    @property
    def rank(self) -> int:
        return _VERSION_RANK[self]

    def __lt__(self, other: "CvssVersion") -> bool:
        if not isinstance(other, CvssVersion):
            return NotImplemented
        return self.rank < other.rank

    @property
    def is_v3(self) -> bool:
        return self is not CvssVersion.V2

    @classmethod
    def from_tag(cls, tag: str) -> "CvssVersion":
        for version in cls:
            if version.value == tag:
                return version
        if tag == "2":
            return cls.V2
        raise NoMatchingVersion(f"unsupported CVSS version tag: {tag!r}")


_VERSION_RANK = {CvssVersion.V2: 0, CvssVersion.V3_0: 1, CvssVersion.V3_1: 2}


@enum.unique
class MetricGroup(enum.Enum):
    BASE = "Base"
    TEMPORAL = "Temporal"
    ENVIRONMENTAL = "Environmental"


# Sentinel codes that mean "metric present but not defined".  They render
# as "XXXX" in expanded vector text.
NOT_DEFINED_V3 = "X"
NOT_DEFINED_V2 = "ND"
NOT_DEFINED_TEXT = "XXXX"


@dataclass(frozen=True)
class MetricDef:
    """One metric of one CVSS version: key, display name, legal values."""

    abbrev: str
    full_name: str
    group: MetricGroup
    # (code, display name) pairs; the not-defined code, when legal, is
    # listed with display name "XXXX".
    values: tuple[tuple[str, str], ...]

    def value_name(self, code: str) -> str | None:
        for c, name in self.values:
            if c == code:
                return name
        return None

    def code_for(self, value_name: str) -> str | None:
        for c, name in self.values:
            if name == value_name:
                return c
        return None

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.values)


def _m(abbrev, full_name, group, values) -> MetricDef:
    return MetricDef(abbrev, full_name, group, tuple(values))


_ND3 = (NOT_DEFINED_V3, NOT_DEFINED_TEXT)
_ND2 = (NOT_DEFINED_V2, NOT_DEFINED_TEXT)

# CVSS v3.x metrics in canonical vector-string order.
V3_METRICS: tuple[MetricDef, ...] = (
    _m("AV", "Attack Vector", MetricGroup.BASE,
       [("N", "Network"), ("A", "Adjacent"), ("L", "Local"), ("P", "Physical")]),
    _m("AC", "Attack Complexity", MetricGroup.BASE,
       [("L", "Low"), ("H", "High")]),
    _m("PR", "Privileges Required", MetricGroup.BASE,
       [("N", "None"), ("L", "Low"), ("H", "High")]),
    _m("UI", "User Interaction", MetricGroup.BASE,
       [("N", "None"), ("R", "Required")]),
    _m("S", "Scope", MetricGroup.BASE,
       [("U", "Unchanged"), ("C", "Changed")]),
    _m("C", "Confidentiality", MetricGroup.BASE,
       [("H", "High"), ("L", "Low"), ("N", "None")]),
    _m("I", "Integrity", MetricGroup.BASE,
       [("H", "High"), ("L", "Low"), ("N", "None")]),
    _m("A", "Availability", MetricGroup.BASE,
       [("H", "High"), ("L", "Low"), ("N", "None")]),
    _m("E", "Exploit Code Maturity", MetricGroup.TEMPORAL,
       [_ND3, ("H", "High"), ("F", "Functional"), ("P", "Proof-of-Concept"),
        ("U", "Unproven")]),
    _m("RL", "Remediation Level", MetricGroup.TEMPORAL,
       [_ND3, ("U", "Unavailable"), ("W", "Workaround"), ("T", "Temporary Fix"),
        ("O", "Official Fix")]),
    _m("RC", "Report Confidence", MetricGroup.TEMPORAL,
       [_ND3, ("C", "Confirmed"), ("R", "Reasonable"), ("U", "Unknown")]),
    _m("CR", "Confidentiality Requirement", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("H", "High"), ("M", "Medium"), ("L", "Low")]),
    _m("IR", "Integrity Requirement", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("H", "High"), ("M", "Medium"), ("L", "Low")]),
    _m("AR", "Availability Requirement", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("H", "High"), ("M", "Medium"), ("L", "Low")]),
    _m("MAV", "Modified Attack Vector", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("N", "Network"), ("A", "Adjacent"), ("L", "Local"),
        ("P", "Physical")]),
    _m("MAC", "Modified Attack Complexity", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("L", "Low"), ("H", "High")]),
    _m("MPR", "Modified Privileges Required", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("N", "None"), ("L", "Low"), ("H", "High")]),
    _m("MUI", "Modified User Interaction", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("N", "None"), ("R", "Required")]),
    _m("MS", "Modified Scope", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("U", "Unchanged"), ("C", "Changed")]),
    _m("MC", "Modified Confidentiality", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("H", "High"), ("L", "Low"), ("N", "None")]),
    _m("MI", "Modified Integrity", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("H", "High"), ("L", "Low"), ("N", "None")]),
    _m("MA", "Modified Availability", MetricGroup.ENVIRONMENTAL,
       [_ND3, ("H", "High"), ("L", "Low"), ("N", "None")]),
)

# CVSS v2 metrics in canonical vector-string order.
V2_METRICS: tuple[MetricDef, ...] = (
    _m("AV", "Access Vector", MetricGroup.BASE,
       [("L", "Local"), ("A", "Adjacent Network"), ("N", "Network")]),
    _m("AC", "Access Complexity", MetricGroup.BASE,
       [("H", "High"), ("M", "Medium"), ("L", "Low")]),
    _m("Au", "Authentication", MetricGroup.BASE,
       [("M", "Multiple"), ("S", "Single"), ("N", "None")]),
    _m("C", "Confidentiality Impact", MetricGroup.BASE,
       [("N", "None"), ("P", "Partial"), ("C", "Complete")]),
    _m("I", "Integrity Impact", MetricGroup.BASE,
       [("N", "None"), ("P", "Partial"), ("C", "Complete")]),
    _m("A", "Availability Impact", MetricGroup.BASE,
       [("N", "None"), ("P", "Partial"), ("C", "Complete")]),
    _m("E", "Exploitability", MetricGroup.TEMPORAL,
       [("U", "Unproven"), ("POC", "Proof-of-Concept"), ("F", "Functional"),
        ("H", "High"), _ND2]),
    _m("RL", "Remediation Level", MetricGroup.TEMPORAL,
       [("OF", "Official Fix"), ("TF", "Temporary Fix"), ("W", "Workaround"),
        ("U", "Unavailable"), _ND2]),
    _m("RC", "Report Confidence", MetricGroup.TEMPORAL,
       [("UC", "Unconfirmed"), ("UR", "Uncorroborated"), ("C", "Confirmed"),
        _ND2]),
    _m("CDP", "Collateral Damage Potential", MetricGroup.ENVIRONMENTAL,
       [("N", "None"), ("L", "Low"), ("LM", "Low-Medium"), ("MH", "Medium-High"),
        ("H", "High"), _ND2]),
    _m("TD", "Target Distribution", MetricGroup.ENVIRONMENTAL,
       [("N", "None"), ("L", "Low"), ("M", "Medium"), ("H", "High"), _ND2]),
    _m("CR", "Confidentiality Requirement", MetricGroup.ENVIRONMENTAL,
       [("L", "Low"), ("M", "Medium"), ("H", "High"), _ND2]),
    _m("IR", "Integrity Requirement", MetricGroup.ENVIRONMENTAL,
       [("L", "Low"), ("M", "Medium"), ("H", "High"), _ND2]),
    _m("AR", "Availability Requirement", MetricGroup.ENVIRONMENTAL,
       [("L", "Low"), ("M", "Medium"), ("H", "High"), _ND2]),
)

_METRICS_BY_VERSION: dict[CvssVersion, tuple[MetricDef, ...]] = {
    CvssVersion.V2: V2_METRICS,
    CvssVersion.V3_0: V3_METRICS,
    CvssVersion.V3_1: V3_METRICS,
}

_INDEX_BY_VERSION: dict[CvssVersion, dict[str, MetricDef]] = {
    version: {m.abbrev: m for m in metrics}
    for version, metrics in _METRICS_BY_VERSION.items()
}

_NAME_INDEX_BY_VERSION: dict[CvssVersion, dict[str, MetricDef]] = {
    version: {m.full_name: m for m in metrics}
    for version, metrics in _METRICS_BY_VERSION.items()
}


def metrics_for(version: CvssVersion) -> tuple[MetricDef, ...]:
    """All metrics of a version in canonical order."""
    return _METRICS_BY_VERSION[version]


def metric_def(version: CvssVersion, abbrev: str) -> MetricDef | None:
    return _INDEX_BY_VERSION[version].get(abbrev)


def metric_by_name(version: CvssVersion, full_name: str) -> MetricDef | None:
    return _NAME_INDEX_BY_VERSION[version].get(full_name)


def canonical_index(version: CvssVersion, abbrev: str) -> int:
    for i, m in enumerate(_METRICS_BY_VERSION[version]):
        if m.abbrev == abbrev:
            return i
    raise KeyError(abbrev)


def not_defined_code(version: CvssVersion) -> str:
    return NOT_DEFINED_V3 if version.is_v3 else NOT_DEFINED_V2


def is_not_defined(version: CvssVersion, code: str) -> bool:
    return code == not_defined_code(version)


def versions_newest_first() -> tuple[CvssVersion, ...]:
    return (CvssVersion.V3_1, CvssVersion.V3_0, CvssVersion.V2)
