"""The expert review loop: prioritized queue, decisions, audit, export.

    python3 demos/06_review_queue.py

The same store also runs behind the HTTP API (see `vulneval serve` and
docs/review-api.md); this demo drives it in-process.
"""

import tempfile
from pathlib import Path

from vulneval import review
from vulneval.corpus import VexCategory, VexJustification
from vulneval.cvss import CvssVersion
from vulneval.inference import EvaluationDraft


def draft(key, category, score=None, justification=VexJustification.NA):
    return EvaluationDraft(
        evaluation_key=key,
        cvss_version=CvssVersion.V3_1,
        vex_category=category,
        vex_justification=justification,
        internal_comment="Component usage reviewed.",
        customer_comment="Assessment available on request.",
        cvss_score=score,
    )


with tempfile.TemporaryDirectory() as scratch:
    store = review.ReviewStore(Path(scratch) / "review")

    # Affected drafts always come first, ordered by score; ties fall back
    # to arrival order.
    store.enqueue(draft(("A-1", "N-1"), VexCategory.NOT_AFFECTED,
                        justification=VexJustification.COMPONENT_NOT_PRESENT, score=9.8))
    store.enqueue(draft(("A-2", "N-2"), VexCategory.AFFECTED, score=5.0))
    store.enqueue(draft(("A-3", "N-3"), VexCategory.AFFECTED, score=9.8))

    page, _ = store.next_page()
    print("queue order:")
    for item in page:
        print(f"  {item.draft.evaluation_key} {item.draft.vex_category.value:12s} "
              f"score={item.draft.cvss_score}")

    # Decisions are Pending -> Accepted/Edited/Rejected, first write wins.
    top = page[0]
    store.submit_decision(
        top.item_id, review.Decision(review.DecisionAction.ACCEPT, note="confirmed"),
        reviewer="expert-1",
    )
    middle = page[1]
    store.submit_decision(
        middle.item_id,
        review.Decision(
            review.DecisionAction.EDIT,
            edited_fields={"customer_comment": "Patch scheduled for next release."},
            note="wording",
        ),
        reviewer="expert-1",
    )
    bottom = page[2]
    store.submit_decision(
        bottom.item_id, review.Decision(review.DecisionAction.REJECT, note="duplicate"),
        reviewer="expert-2",
    )

    # Accepted and edited items export in the evaluations-store format,
    # closing the loop for the next training round.
    out = Path(scratch) / "accepted.jsonl"
    count = store.export_accepted(out)
    print(f"\nexported {count} evaluations:")
    print(out.read_text())

    # Every mutation is hash-chained; tampering would break verification.
    print("audit chain intact:", store.verify_audit_chain())
    print("audit actions:", [e["action"] for e in store.audit_entries])
