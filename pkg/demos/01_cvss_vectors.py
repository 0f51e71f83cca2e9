"""Working with CVSS vectors: parsing, expanded text, diffs and scores.

Run from the repository root:

    python3 demos/01_cvss_vectors.py
"""

from vulneval.cvss import (
    MetricGroup,
    diff_environmental,
    expand_to_text,
    infer_version,
    parse_expanded_text,
    parse_vector,
    score,
)

# A vector string with an explicit version prefix parses directly.
vector = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
print("parsed:", vector.to_string())
print("scores:", score(vector))

# Without a prefix, the highest version whose metrics and values all fit
# wins.  "Au" only exists in v2, so this one lands there.
legacy = parse_vector("AV:N/AC:L/Au:N/C:P/I:P/A:P")
print("\nlegacy vector version:", legacy.version.value, "->", score(legacy))

# infer_version works on bare key sets the same way.
print("key-set inference:", infer_version({"AV", "AC", "PR", "UI", "S", "C", "I", "A"}))

# Vectors expand into the fixed sentence form used in prompts and
# pretraining documents; fill_missing adds an "is XXXX" sentence for every
# absent metric of the requested groups.
notification = parse_vector("AV:A/AC:H/PR:L/UI:N/S:U/C:L/I:H/A:L/E:U/RL:O/RC:C")
print("\nbase+temporal description:")
print(expand_to_text(notification, {MetricGroup.BASE, MetricGroup.TEMPORAL}))

print("\nenvironmental description of an empty vector (all placeholders):")
from vulneval.cvss import CvssVector, CvssVersion

empty = CvssVector.empty(CvssVersion.V3_1)
print(expand_to_text(empty, {MetricGroup.ENVIRONMENTAL}, fill_missing=True))

# The expanded text round-trips, with XXXX mapping to the not-defined
# sentinel.
round_tripped = parse_expanded_text(
    "Modified Attack Vector is Network. Confidentiality Requirement is XXXX."
)
print("\nround-tripped entries:", round_tripped.entries)

# An expert's evaluated vector minus what the notification already said:
# this difference is exactly what the Vector generation task must produce.
evaluated = parse_vector(
    "CVSS:3.1/AV:A/AC:H/PR:L/UI:N/S:U/C:L/I:H/A:L/E:U/RL:O/RC:C/CR:H/MAV:N"
)
notification31 = parse_vector(
    "CVSS:3.1/AV:A/AC:H/PR:L/UI:N/S:U/C:L/I:H/A:L/E:U/RL:O/RC:C"
)
new_components = diff_environmental(evaluated, notification31)
print("\nnew components:", new_components.to_string())
print("as response text:")
print(expand_to_text(new_components, {MetricGroup.ENVIRONMENTAL}, fill_missing=True))
