"""From raw CVE records to the pretraining corpus files.

Uses the bundled NVD response fixture, so no network access is needed:

    python3 demos/02_pretraining_corpus.py
"""

import tempfile
from pathlib import Path

from vulneval import corpus, dapt, nvd
from vulneval.textclean import clean_description, merge_descriptions

ROOT = Path(__file__).resolve().parent.parent

# Descriptions get cleaned (URLs, markup, stray bytes) before templating;
# organization documents additionally drop CVE ids.
raw = "Heap overflow in the parser. See https://vendor.example/adv-1 for details."
print("cleaned:", clean_description(raw))
print("org-cleaned:", clean_description("CVE-2024-0001: " + raw, org_mode=True))

# Multiple descriptions of one CVE merge when they overlap at most 70%;
# near-duplicates collapse to the longer text.
print("\nmerged:", merge_descriptions([
    "Out-of-bounds read in the decoder.",
    "The decoder state machine permits reads past the allocated frame buffer.",
]))

# Map an NVD 2.0 response file into records and render the document
# templates.
records = nvd.load_cve_file(ROOT / "sampledata" / "nvd_page.json")
documents = []
for record in records:
    prepared = dapt.prepare_cve_record(record)
    if prepared is not None:
        documents.append(dapt.render_cve_document(prepared))
print(f"\nrendered {len(documents)} CVE documents; first one:")
print(documents[0].text)

# Organization notifications use their own template.
notifications = corpus.load_store(
    ROOT / "sampledata" / "notifications.jsonl", corpus.StoreKind.NOTIFICATIONS
)
for notification in notifications[:2]:
    document = dapt.render_notification_document(
        clean_description(notification.description, org_mode=True),
        notification.base_temporal_vector,
    )
    documents.append(document)
    print("\n" + document.text)

# Emission shuffles deterministically and writes a 90:10 train/validation
# split plus a manifest.
with tempfile.TemporaryDirectory() as scratch:
    manifest = dapt.emit_dapt_corpus(documents, seed=7, out_dir=scratch)
    print("\nmanifest:", manifest)
