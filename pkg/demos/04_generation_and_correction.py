"""Budgeted generation with batching, the Vector-skip rule and rule-based
correction, against the deterministic lookup-table backend.

    python3 demos/04_generation_and_correction.py
"""

import tempfile
from pathlib import Path

from vulneval import corpus, inference, instructions
from vulneval.tokenizers import get_tokenizer

ROOT = Path(__file__).resolve().parent.parent
SAMPLE = ROOT / "sampledata"

assets = corpus.index_by_id(
    corpus.load_store(SAMPLE / "assets.jsonl", corpus.StoreKind.ASSETS),
    corpus.StoreKind.ASSETS,
)
notifications = corpus.index_by_id(
    corpus.load_store(SAMPLE / "notifications.jsonl", corpus.StoreKind.NOTIFICATIONS),
    corpus.StoreKind.NOTIFICATIONS,
)
evaluations = corpus.load_store(SAMPLE / "evaluations.jsonl", corpus.StoreKind.EVALUATIONS)
contexts = [
    corpus.join_evaluation(e, assets, notifications)
    for e in evaluations
    if corpus.validate_evaluation(e) is corpus.Verdict.USABLE
]

# Requests split at the 920-token threshold; the long batch gets a context
# budget of 150 tokens beyond its longest member.
plan = inference.plan_batches([300, 950, 800, 2000])
print("batch plan:", plan)

# The stub backend answers each prompt with the gold response and records
# every call, which makes the serving rule observable.
responses = {}
for context in contexts:
    for task in instructions.TaskType:
        responses[instructions.render_prompt(context, task)] = (
            instructions.render_response(context, task)
        )
backend = inference.LookupTableBackend(responses)

with tempfile.TemporaryDirectory() as scratch:
    result = inference.run_pipeline(
        contexts,
        backend,
        output_path=Path(scratch) / "drafts.jsonl",
        tokenizer=get_tokenizer("word"),
    )

print(f"\n{len(result.drafts)} drafts, {len(result.errors)} errors")
vector_calls = backend.calls_for_instruction("Generate environmental vectors.")
print(f"Vector prompts sent to the backend: {len(vector_calls)} "
      f"(only Affected drafts; NotAffected skip the call entirely)")

for draft in result.drafts[:3]:
    print(f"\n{draft.evaluation_key}: {draft.vex_category and draft.vex_category.value}"
          f" / {draft.vex_justification.value}"
          f" score={draft.cvss_score} corrections={list(draft.correction_log)}")

# Correction rules on a deliberately broken draft: unknown justification
# text becomes Other (rule 2), the empty customer comment is filled from
# the internal one (rule 3).
from vulneval.corpus import VexCategory
from vulneval.cvss import CvssVersion

broken = inference.EvaluationDraft(
    evaluation_key=("A-0002", "N-0002"),
    cvss_version=CvssVersion.V3_1,
    vex_category=VexCategory.NOT_AFFECTED,
    vex_justification=None,
    raw_justification_text="component missing entirely",
    internal_comment="The affected library is not shipped.",
    customer_comment="",
)
fixed = inference.apply_correction_rules(broken)
print("\ncorrected draft:", fixed.vex_justification.value,
      "| customer comment:", repr(fixed.customer_comment),
      "| log:", list(fixed.correction_log))
