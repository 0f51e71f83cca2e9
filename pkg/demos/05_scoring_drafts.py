"""Scoring generated drafts against expert evaluations.

    python3 demos/05_scoring_drafts.py
"""

import tempfile

from vulneval import evalmetrics
from vulneval.cvss import parse_vector

# ROUGE-L measures comment quality by longest common subsequence.
print("identical:", evalmetrics.rouge_l("no impact on the product", "no impact on the product"))
print("close:    ", round(evalmetrics.rouge_l(
    "the component is not shipped with the product",
    "the component is not included in the product",
), 4))
print("disjoint: ", evalmetrics.rouge_l("completely different", "text entirely"))

# Micro-F1 over single-label predictions equals plain accuracy.
predictions = ["Affected", "Affected", "NotAffected", "NotAffected"]
gold = ["Affected", "NotAffected", "NotAffected", "NotAffected"]
print("\ncategory micro-F1:", evalmetrics.micro_f1(predictions, gold))

# Vector outputs are scored per environmental metric, with XXXX (left
# undefined) and N/A (metric foreign to the governing version) as labels
# of their own.
gold_vectors = [
    parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N/CR:H/MAV:N/MC:H"),
    parse_vector("AV:N/AC:L/Au:N/C:P/I:P/A:P/CDP:L/TD:M"),
]
predicted_vectors = [
    parse_vector("CVSS:3.1/CR:H/MAV:A/MC:H"),  # MAV wrong, rest right
    parse_vector("AV:N/AC:L/Au:N/C:P/I:P/A:P/CDP:L/TD:M"),
]
matrices = evalmetrics.vector_component_scores(predicted_vectors, gold_vectors)
for name, matrix in matrices.items():
    print(f"{name:32s} micro-F1={matrix.micro_f1():.3f} support={matrix.total}")

report = evalmetrics.build_report(
    internal_pairs=[("not shipped", "not shipped")],
    customer_pairs=[("fix planned", "fix planned for next release")],
    category_pairs=list(zip(predictions, gold)),
    justification_pairs=[("NA", "NA"), ("Other", "ComponentNotPresent")],
    vector_pairs=list(zip(predicted_vectors, gold_vectors)),
)
with tempfile.TemporaryDirectory() as scratch:
    json_path, csv_path = evalmetrics.emit_report(report, scratch)
    print("\nwrote", json_path.name, "and", csv_path.name)
    print((csv_path).read_text())
