"""Building the instruction-tuning dataset from the three stores.

    python3 demos/03_instruction_dataset.py
"""

import tempfile
from pathlib import Path

from vulneval import corpus, instructions
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

# Only complete evaluations in the two decidable categories feed training;
# everything else lands in the exclusion report.
contexts, excluded = [], {}
for evaluation in evaluations:
    verdict = corpus.validate_evaluation(evaluation)
    if verdict is corpus.Verdict.USABLE:
        contexts.append(corpus.join_evaluation(evaluation, assets, notifications))
    else:
        excluded[verdict.value] = excluded.get(verdict.value, 0) + 1
print(f"{len(contexts)} usable contexts, exclusions: {excluded}")

# Each context yields one record per task type.  The full training text is
# the prompt, the response and the stop delimiter.
tokenizer = get_tokenizer("bpe")
records = []
for context in contexts:
    records.extend(instructions.render_all_tasks(context, tokenizer))
print(f"\n{len(records)} records; the category record of the first context:")
print("-" * 72)
print(records[0].training_text)
print("-" * 72)

# Records beyond the token limit are dropped, then exact duplicates
# (same software, notification text and evaluation) collapse.
records, token_report = instructions.filter_records(records)
records = instructions.deduplicate(records)
print("\nafter filter+dedup:", len(records), "records;", token_report)

# The 80:10:10 split keeps all four records of one evaluation in the same
# split and emits Alpaca-format JSONL files plus a manifest.
with tempfile.TemporaryDirectory() as scratch:
    manifest = instructions.split_dataset(records, seed=7, out_dir=scratch)
    for name, info in manifest["splits"].items():
        print(name, "->", info["records"], "records,", len(info["evaluation_keys"]), "evaluations")

# Vocabulary candidates: first words of component and software names the
# tokenizer cannot already express as a single token.
tokens = instructions.extract_vocab_tokens(
    assets.values(), notifications.values(), tokenizer
)
print("\nnew vocabulary tokens:", tokens)
