"""The organization triad: assets, notifications and expert evaluations.

Stores are line-delimited JSON files (one record per line, documented in
docs/store-schemas.md).  Loading validates each record; queries over the
loaded snapshots are read-only and safe to share.
"""

from __future__ import annotations

import enum
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .cvss import (
    CvssError,
    CvssVector,
    CvssVersion,
    NoMatchingVersion,
    infer_version,
    parse_vector,
)
from .textclean import clean_description

logger = logging.getLogger(__name__)


class StoreError(Exception):
    """Base class for store loading/joining failures."""


class SchemaError(StoreError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class DuplicateId(StoreError):
    pass


class MissingAsset(StoreError):
    pass


class MissingNotification(StoreError):
    pass


class VexCategory(enum.Enum):
    AFFECTED = "Affected"
    NOT_AFFECTED = "NotAffected"
    UNDER_INVESTIGATION = "UnderInvestigation"
    END_OF_LIFE = "EndOfLife"

    @classmethod
    def parse(cls, text: str) -> "VexCategory":
        squeezed = re.sub(r"[\s_-]", "", text).casefold()
        for member in cls:
            if member.value.casefold() == squeezed:
                return member
        raise ValueError(f"not a VEX category: {text!r}")


class VexJustification(enum.Enum):
    VULNERABLE_CODE_NOT_PRESENT = "VulnerableCodeNotPresent"
    COMPONENT_NOT_PRESENT = "ComponentNotPresent"
    VULNERABLE_CODE_NOT_IN_EXECUTE_PATH = "VulnerableCodeNotInExecutePath"
    VULNERABLE_CODE_CANNOT_BE_CONTROLLED_BY_ADVERSARY = (
        "VulnerableCodeCannotBeControlledByAdversary"
    )
    INLINE_MITIGATIONS_ALREADY_EXIST = "InlineMitigationsAlreadyExist"
    OTHER = "Other"
    NA = "NA"

    @classmethod
    def parse(cls, text: str) -> tuple["VexJustification", bool]:
        """Parse a justification name; returns (member, was_alias).

        "VulnerableComponentNotPresent" appears in the wild as a synonym
        of VulnerableCodeNotPresent; it is accepted and flagged rather
        than silently merged.
        """
        squeezed = re.sub(r"[\s_/-]", "", text).casefold()
        if squeezed == "vulnerablecomponentnotpresent":
            return cls.VULNERABLE_CODE_NOT_PRESENT, True
        if squeezed in ("na", "none", ""):
            return cls.NA, False
        for member in cls:
            if member.value.casefold() == squeezed:
                return member, False
        raise ValueError(f"not a VEX justification: {text!r}")

    @property
    def words(self) -> str:
        """The enum name split at capital boundaries ("Component Not Present")."""
        if self is VexJustification.NA:
            return ""
        return " ".join(re.findall(r"[A-Z][a-z]*", self.value))


@dataclass(frozen=True)
class Component:
    name: str
    vendor: str | None
    version_spec: str

    @property
    def description(self) -> str:
        parts = [self.name, self.vendor, self.version_spec]
        return " - ".join(p for p in parts if p)

    @property
    def normalized_name(self) -> str:
        return re.sub(r"[^0-9a-z]+", " ", self.name.casefold()).strip()

    def versions_intersect(self, other: "Component") -> bool:
        if self.version_spec == "All Versions" or other.version_spec == "All Versions":
            return True
        return self.version_spec.strip() == other.version_spec.strip()


@dataclass(frozen=True)
class Asset:
    asset_id: str
    product_name_version: str
    software_name_version: str
    sub_organization: str
    components: tuple[Component, ...] = ()


@dataclass(frozen=True)
class Notification:
    notification_id: str
    description: str
    affected_components: tuple[Component, ...] = ()
    base_temporal_vector: CvssVector | None = None
    base_temporal_score: float | None = None
    cve_ids: tuple[str, ...] = ()
    cwe_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class Evaluation:
    asset_id: str
    notification_id: str
    vex_category: VexCategory | None
    vex_justification: VexJustification
    internal_comment: str
    customer_comment: str
    vector: CvssVector | None = None
    cvss_score: float | None = None

    def __post_init__(self):
        if (
            self.vex_justification is not VexJustification.NA
            and self.vex_category is not VexCategory.NOT_AFFECTED
        ):
            raise ValueError(
                "a justification other than NA requires category NotAffected"
            )

    @property
    def key(self) -> tuple[str, str]:
        return (self.asset_id, self.notification_id)


class Verdict(enum.Enum):
    USABLE = "Usable"
    EXCLUDED_UNDER_INVESTIGATION = "ExcludedUnderInvestigation"
    EXCLUDED_END_OF_LIFE = "ExcludedEndOfLife"
    EXCLUDED_INCOMPLETE = "ExcludedIncomplete"


@dataclass(frozen=True)
class EvaluationContext:
    """One evaluation joined with its asset and notification."""

    evaluation: Evaluation
    asset: Asset
    notification: Notification
    cleaned_description: str
    common_components: tuple[Component, ...]
    cvss_version: CvssVersion


# --- store loading -----------------------------------------------------------

class StoreKind(enum.Enum):
    ASSETS = "Assets"
    NOTIFICATIONS = "Notifications"
    EVALUATIONS = "Evaluations"


def _component_from_json(obj: dict) -> Component:
    if not isinstance(obj, dict) or "name" not in obj:
        raise ValueError("component must be an object with a 'name'")
    return Component(
        name=obj["name"],
        vendor=obj.get("vendor"),
        version_spec=obj.get("version_spec", "All Versions"),
    )


def _vector_from_json(obj, where: str) -> CvssVector | None:
    if obj in (None, ""):
        return None
    try:
        return parse_vector(obj)
    except CvssError as exc:
        raise ValueError(f"{where}: {exc}") from exc


def _asset_from_json(obj: dict) -> Asset:
    return Asset(
        asset_id=obj["asset_id"],
        product_name_version=obj["product_name_version"],
        software_name_version=obj["software_name_version"],
        sub_organization=obj["sub_organization"],
        components=tuple(_component_from_json(c) for c in obj.get("components", [])),
    )


def _notification_from_json(obj: dict) -> Notification:
    description = obj["description"]
    if not isinstance(description, str) or not clean_description(description):
        raise ValueError("notification description empty after cleaning")
    return Notification(
        notification_id=obj["notification_id"],
        description=description,
        affected_components=tuple(
            _component_from_json(c) for c in obj.get("affected_components", [])
        ),
        base_temporal_vector=_vector_from_json(
            obj.get("base_temporal_vector"), "base_temporal_vector"
        ),
        base_temporal_score=obj.get("base_temporal_score"),
        cve_ids=tuple(obj.get("cve_ids", [])),
        cwe_ids=tuple(obj.get("cwe_ids", [])),
    )


def _evaluation_from_json(obj: dict) -> Evaluation:
    category = None
    if obj.get("vex_category"):
        category = VexCategory.parse(obj["vex_category"])
    justification = VexJustification.NA
    raw_justification = obj.get("vex_justification")
    if raw_justification:
        justification, was_alias = VexJustification.parse(raw_justification)
        if was_alias:
            logger.warning(
                "evaluation (%s, %s): justification %r normalized to %s",
                obj.get("asset_id"), obj.get("notification_id"),
                raw_justification, justification.value,
            )
    return Evaluation(
        asset_id=obj["asset_id"],
        notification_id=obj["notification_id"],
        vex_category=category,
        vex_justification=justification,
        internal_comment=obj.get("internal_comment", ""),
        customer_comment=obj.get("customer_comment", ""),
        vector=_vector_from_json(obj.get("vector"), "vector"),
        cvss_score=obj.get("cvss_score"),
    )


_PARSERS = {
    StoreKind.ASSETS: (_asset_from_json, lambda r: r.asset_id),
    StoreKind.NOTIFICATIONS: (_notification_from_json, lambda r: r.notification_id),
    StoreKind.EVALUATIONS: (_evaluation_from_json, lambda r: r.key),
}


def load_store(path: str | Path, kind: StoreKind) -> list:
    """Load and validate one line-delimited JSON store."""
    parser, key_of = _PARSERS[kind]
    records = []
    seen = set()
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                record = parser(obj)
            except (ValueError, KeyError, TypeError) as exc:
                raise SchemaError(f"{kind.value}: {exc}", line_number) from exc
            key = key_of(record)
            if key in seen:
                raise DuplicateId(f"{kind.value}: duplicate id {key!r}")
            seen.add(key)
            records.append(record)
    return records


# --- joining -----------------------------------------------------------------

def match_common_components(asset: Asset, notification: Notification) -> tuple[Component, ...]:
    """Asset components the notification also names.

    Names match case- and punctuation-insensitively; version specs must
    intersect ("All Versions" intersects everything).  Order follows the
    asset's component list.
    """
    matched = []
    for mine in asset.components:
        for theirs in notification.affected_components:
            if mine.normalized_name == theirs.normalized_name and mine.versions_intersect(theirs):
                matched.append(mine)
                break
    return tuple(matched)


def _context_version(evaluation: Evaluation, notification: Notification) -> CvssVersion:
    vectors = [
        v for v in (notification.base_temporal_vector, evaluation.vector)
        if v is not None
    ]
    if not vectors:
        # Vacuously every version matches an empty key set; highest wins.
        return CvssVersion.V3_1
    versions = {v.version for v in vectors}
    if len(versions) == 1:
        return versions.pop()
    # Disagreeing vectors: fall back to key-based inference over the union;
    # mixed v2/v3 keys end up on the expert-correction path.
    keys: set[str] = set()
    for vector in vectors:
        keys.update(vector.keys())
    return infer_version(keys)


def join_evaluation(
    evaluation: Evaluation,
    assets: dict[str, Asset],
    notifications: dict[str, Notification],
) -> EvaluationContext:
    """Resolve ids and assemble the full evaluation context."""
    asset = assets.get(evaluation.asset_id)
    if asset is None:
        raise MissingAsset(f"unknown asset id {evaluation.asset_id!r}")
    notification = notifications.get(evaluation.notification_id)
    if notification is None:
        raise MissingNotification(
            f"unknown notification id {evaluation.notification_id!r}"
        )
    return EvaluationContext(
        evaluation=evaluation,
        asset=asset,
        notification=notification,
        cleaned_description=clean_description(notification.description, org_mode=True),
        common_components=match_common_components(asset, notification),
        cvss_version=_context_version(evaluation, notification),
    )


def validate_evaluation(evaluation: Evaluation) -> Verdict:
    """Decide whether an evaluation can feed instruction records."""
    if evaluation.vex_category is VexCategory.UNDER_INVESTIGATION:
        return Verdict.EXCLUDED_UNDER_INVESTIGATION
    if evaluation.vex_category is VexCategory.END_OF_LIFE:
        return Verdict.EXCLUDED_END_OF_LIFE
    incomplete = (
        evaluation.vex_category is None
        or (evaluation.vex_category is VexCategory.AFFECTED and evaluation.vector is None)
        or not evaluation.internal_comment.strip()
    )
    if incomplete:
        return Verdict.EXCLUDED_INCOMPLETE
    return Verdict.USABLE


def index_by_id(records: Iterable, kind: StoreKind) -> dict:
    _, key_of = _PARSERS[kind]
    return {key_of(r): r for r in records}


# --- serialization back to the wire ------------------------------------------

def evaluation_to_json(evaluation: Evaluation) -> dict:
    return {
        "asset_id": evaluation.asset_id,
        "notification_id": evaluation.notification_id,
        "vex_category": evaluation.vex_category.value if evaluation.vex_category else None,
        "vex_justification": evaluation.vex_justification.value,
        "internal_comment": evaluation.internal_comment,
        "customer_comment": evaluation.customer_comment,
        "vector": evaluation.vector.to_string() if evaluation.vector else None,
        "cvss_score": evaluation.cvss_score,
    }
