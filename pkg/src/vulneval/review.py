"""Expert review queue: corrected drafts in, validated evaluations out.

Affected drafts always outrank NotAffected ones; ties break on the
environmental-or-base score (descending), then arrival order.  All state
changes append to a line-delimited JSON event log and a hash-chained
audit log; decisions are first-write-wins per item.
"""

from __future__ import annotations

import enum
import hashlib
import json
import logging
import threading
import time
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

from .corpus import Evaluation, VexCategory, VexJustification, evaluation_to_json
from .cvss import CvssError, parse_vector
from .inference import EvaluationDraft, draft_from_json, draft_to_json

logger = logging.getLogger(__name__)


class ReviewError(Exception):
    pass


class NotFound(ReviewError):
    pass


class AlreadyDecided(ReviewError):
    pass


class InvalidEdit(ReviewError):
    pass


class ReviewStatus(enum.Enum):
    PENDING = "Pending"
    ACCEPTED = "Accepted"
    EDITED = "Edited"
    REJECTED = "Rejected"


class DecisionAction(enum.Enum):
    ACCEPT = "Accept"
    EDIT = "Edit"
    REJECT = "Reject"


@dataclass(frozen=True)
class Decision:
    action: DecisionAction
    edited_fields: dict | None = None
    note: str = ""

    def __post_init__(self):
        if self.action is DecisionAction.EDIT and not self.edited_fields:
            raise InvalidEdit("Edit decisions require edited_fields")


@dataclass(frozen=True)
class ReviewItem:
    item_id: str
    draft: EvaluationDraft
    display: dict
    status: ReviewStatus = ReviewStatus.PENDING
    reviewer: str | None = None
    decided_at: float | None = None
    enqueued_at: float = 0.0
    seq: int = 0
    note: str = ""
    edited_fields: dict | None = None

    @property
    def priority(self) -> tuple:
        ranks = {VexCategory.AFFECTED: 0, VexCategory.NOT_AFFECTED: 2}
        rank = ranks.get(self.draft.vex_category, 1)
        score = self.draft.cvss_score
        return (rank, score is None, -(score or 0.0), self.seq)


def draft_to_evaluation(draft: EvaluationDraft, edits: dict | None = None) -> Evaluation:
    """Materialize a draft (plus optional expert edits) as an Evaluation.

    Raises InvalidEdit when the result would break the evaluation
    invariants, naming the violation.
    """
    fields = {
        "asset_id": draft.evaluation_key[0],
        "notification_id": draft.evaluation_key[1],
        "vex_category": draft.vex_category.value if draft.vex_category else None,
        "vex_justification": (
            draft.vex_justification.value if draft.vex_justification else "NA"
        ),
        "internal_comment": draft.internal_comment,
        "customer_comment": draft.customer_comment,
        "vector": draft.vector.to_string() if draft.vector else None,
        "cvss_score": draft.cvss_score,
    }
    allowed = set(fields) - {"asset_id", "notification_id"}
    for key, value in (edits or {}).items():
        if key not in allowed:
            raise InvalidEdit(f"field {key!r} is not editable")
        fields[key] = value
    try:
        category = VexCategory.parse(fields["vex_category"]) if fields["vex_category"] else None
        justification, _ = VexJustification.parse(fields["vex_justification"] or "NA")
        vector = parse_vector(fields["vector"]) if fields["vector"] else None
        return Evaluation(
            asset_id=fields["asset_id"],
            notification_id=fields["notification_id"],
            vex_category=category,
            vex_justification=justification,
            internal_comment=fields["internal_comment"] or "",
            customer_comment=fields["customer_comment"] or "",
            vector=vector,
            cvss_score=fields["cvss_score"],
        )
    except (ValueError, CvssError) as exc:
        raise InvalidEdit(str(exc)) from exc


class ReviewStore:
    """In-memory index over an append-only event log."""

    def __init__(self, storage_dir: str | Path | None = None):
        self._lock = threading.RLock()
        self._items: dict[str, ReviewItem] = {}
        self._by_key: dict[tuple[str, str], str] = {}
        self._seq = 0
        self._audit_tail_hash = "0" * 64
        self._audit_entries: list[dict] = []
        self._storage = Path(storage_dir) if storage_dir else None
        if self._storage:
            self._storage.mkdir(parents=True, exist_ok=True)
            self._replay()

    # -- persistence --------------------------------------------------------

    @property
    def _events_path(self) -> Path:
        return self._storage / "events.jsonl"

    @property
    def _audit_path(self) -> Path:
        return self._storage / "audit.jsonl"

    def _append_event(self, event: dict) -> None:
        if self._storage:
            with open(self._events_path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(event, sort_keys=True) + "\n")

    def _replay(self) -> None:
        if not self._events_path.exists():
            return
        with open(self._events_path, encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    self._apply(json.loads(line), persist=False, audit=False)
        if self._audit_path.exists():
            with open(self._audit_path, encoding="utf-8") as handle:
                self._audit_entries = [
                    json.loads(line) for line in handle if line.strip()
                ]
            if self._audit_entries:
                self._audit_tail_hash = self._audit_entries[-1]["hash"]
        logger.info("review store replayed %d items", len(self._items))

    def snapshot(self) -> dict:
        """Write a point-in-time snapshot next to the log (shutdown hook)."""
        with self._lock:
            payload = {
                "items": [self._item_json(i) for i in self._items.values()],
                "audit_tail_hash": self._audit_tail_hash,
                "written_at": time.time(),
            }
        if self._storage:
            (self._storage / "snapshot.json").write_text(
                json.dumps(payload, indent=2, sort_keys=True) + "\n"
            )
        return payload

    close = snapshot

    # -- audit --------------------------------------------------------------

    def _append_audit(self, item_id: str, actor: str, action: str,
                      before: dict | None, after: dict | None) -> None:
        entry = {
            "seq": len(self._audit_entries),
            "item_id": item_id,
            "actor": actor,
            "action": action,
            "before": before,
            "after": after,
            "timestamp": time.time(),
            "prev_hash": self._audit_tail_hash,
        }
        entry["hash"] = _entry_hash(entry)
        self._audit_entries.append(entry)
        self._audit_tail_hash = entry["hash"]
        if self._storage:
            with open(self._audit_path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(entry, sort_keys=True) + "\n")

    def verify_audit_chain(self) -> bool:
        previous = "0" * 64
        for entry in self._audit_entries:
            if entry["prev_hash"] != previous or _entry_hash(entry) != entry["hash"]:
                return False
            previous = entry["hash"]
        return True

    @property
    def audit_entries(self) -> list[dict]:
        return list(self._audit_entries)

    # -- operations ----------------------------------------------------------

    def enqueue(self, draft: EvaluationDraft, display: dict | None = None,
                actor: str = "pipeline") -> tuple[str, bool]:
        """Queue a corrected draft; idempotent per evaluation key."""
        if draft.vex_category in (VexCategory.UNDER_INVESTIGATION, VexCategory.END_OF_LIFE):
            raise ReviewError(f"{draft.vex_category.value} drafts are not reviewable")
        event = {
            "event": "enqueue",
            "item_id": uuid.uuid4().hex,
            "draft": draft_to_json(draft),
            "display": display or {},
            "actor": actor,
            "at": time.time(),
        }
        with self._lock:
            existing = self._by_key.get(draft.evaluation_key)
            if existing is not None:
                return existing, False
            item = self._apply(event, persist=True, audit=True)
            return item.item_id, True

    def _apply(self, event: dict, persist: bool, audit: bool) -> ReviewItem:
        if event["event"] == "enqueue":
            draft = draft_from_json(event["draft"])
            self._seq += 1
            item = ReviewItem(
                item_id=event["item_id"],
                draft=draft,
                display=event.get("display", {}),
                enqueued_at=event.get("at", 0.0),
                seq=self._seq,
            )
            self._items[item.item_id] = item
            self._by_key[draft.evaluation_key] = item.item_id
            if persist:
                self._append_event(event)
            if audit:
                self._append_audit(
                    item.item_id, event.get("actor", "pipeline"), "enqueue",
                    None, self._item_json(item),
                )
            return item
        if event["event"] == "decision":
            return self._apply_decision(event, persist=persist, audit=audit)
        raise ReviewError(f"unknown event type: {event['event']!r}")

    def get(self, item_id: str) -> ReviewItem:
        with self._lock:
            item = self._items.get(item_id)
        if item is None:
            raise NotFound(f"no review item {item_id!r}")
        return item

    def next_page(
        self,
        cursor: str | None = None,
        page_size: int = 20,
        status: ReviewStatus | None = ReviewStatus.PENDING,
        category: VexCategory | None = None,
    ) -> tuple[list[ReviewItem], str | None]:
        """Stable priority-ordered page; cursor is an opaque offset."""
        if page_size <= 0:
            raise ValueError("page_size must be positive")
        with self._lock:
            items = list(self._items.values())
        if status is not None:
            items = [i for i in items if i.status is status]
        if category is not None:
            items = [i for i in items if i.draft.vex_category is category]
        items.sort(key=lambda i: i.priority)
        offset = int(cursor) if cursor else 0
        page = items[offset:offset + page_size]
        next_cursor = str(offset + page_size) if offset + page_size < len(items) else None
        return page, next_cursor

    def submit_decision(self, item_id: str, decision: Decision, reviewer: str) -> ReviewItem:
        event = {
            "event": "decision",
            "item_id": item_id,
            "action": decision.action.value,
            "edited_fields": decision.edited_fields,
            "note": decision.note,
            "reviewer": reviewer,
            "at": time.time(),
        }
        with self._lock:
            return self._apply_decision(event, persist=True, audit=True)

    def _apply_decision(self, event: dict, persist: bool, audit: bool) -> ReviewItem:
        item = self._items.get(event["item_id"])
        if item is None:
            raise NotFound(f"no review item {event['item_id']!r}")
        if item.status is not ReviewStatus.PENDING:
            raise AlreadyDecided(f"item {item.item_id} is already {item.status.value}")
        action = DecisionAction(event["action"])
        edits = event.get("edited_fields")
        # Validate the resulting evaluation before committing anything.
        if action is DecisionAction.EDIT:
            if not edits:
                raise InvalidEdit("Edit decisions require edited_fields")
            draft_to_evaluation(item.draft, edits)
            status = ReviewStatus.EDITED
        elif action is DecisionAction.ACCEPT:
            draft_to_evaluation(item.draft)
            status = ReviewStatus.ACCEPTED
        else:
            status = ReviewStatus.REJECTED
        before = self._item_json(item)
        updated = replace(
            item,
            status=status,
            reviewer=event.get("reviewer"),
            decided_at=event.get("at"),
            note=event.get("note", ""),
            edited_fields=edits if action is DecisionAction.EDIT else None,
        )
        self._items[item.item_id] = updated
        if persist:
            self._append_event(event)
        if audit:
            self._append_audit(
                item.item_id, event.get("reviewer") or "unknown",
                f"decision:{action.value}", before, self._item_json(updated),
            )
        return updated

    def accepted_rows(self) -> list[dict]:
        """Accepted+Edited items as evaluations-store rows, arrival order."""
        with self._lock:
            chosen = sorted(
                (i for i in self._items.values()
                 if i.status in (ReviewStatus.ACCEPTED, ReviewStatus.EDITED)),
                key=lambda i: i.seq,
            )
            return [
                evaluation_to_json(draft_to_evaluation(i.draft, i.edited_fields))
                for i in chosen
            ]

    def export_accepted(self, path: str | Path) -> int:
        """Write Accepted+Edited items in the evaluations-store format."""
        rows = self.accepted_rows()
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8") as handle:
            for row in rows:
                handle.write(json.dumps(row, sort_keys=True) + "\n")
        return len(rows)

    # -- JSON shapes ----------------------------------------------------------

    def _item_json(self, item: ReviewItem) -> dict:
        return item_to_json(item)


def _entry_hash(entry: dict) -> str:
    body = {k: v for k, v in entry.items() if k != "hash"}
    return hashlib.sha256(
        json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


def item_to_json(item: ReviewItem) -> dict:
    draft = item.draft
    return {
        "item_id": item.item_id,
        "status": item.status.value,
        "category": draft.vex_category.value if draft.vex_category else None,
        "justification": (
            draft.vex_justification.value if draft.vex_justification else None
        ),
        "cvss_score": draft.cvss_score,
        "flags": list(draft.flags),
        "correction_log": list(draft.correction_log),
        "display": item.display,
        "reviewer": item.reviewer,
        "decided_at": item.decided_at,
        "enqueued_at": item.enqueued_at,
        "note": item.note,
        "edited_fields": item.edited_fields,
        "draft": draft_to_json(draft),
    }


def item_summary_json(item: ReviewItem) -> dict:
    draft = item.draft
    display = item.display or {}
    return {
        "item_id": item.item_id,
        "status": item.status.value,
        "category": draft.vex_category.value if draft.vex_category else None,
        "cvss_score": draft.cvss_score,
        "software": display.get("software"),
        "notification_snippet": display.get("notification_snippet"),
        "flags": list(draft.flags),
    }
