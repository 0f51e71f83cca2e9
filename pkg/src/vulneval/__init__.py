"""vulneval: vulnerability-evaluation pipeline around a completion backend.

Subsystems:

- ``cvss``          CVSS v2/v3.x vectors: parse, expand to text, diff, score
- ``textclean``     description cleaning and overlap-based merging
- ``nvd``           NVD CVE API client and record mapping
- ``dapt``          pretraining-document templates and corpus emission
- ``corpus``        assets / notifications / evaluations stores and joining
- ``instructions``  instruction-record rendering, filtering, splits, vocab
- ``inference``     budgeted generation, batching, rule-based correction
- ``evalmetrics``   ROUGE-L, micro-F1 and per-metric vector scoring
- ``review``        prioritized expert review queue with audit trail
- ``cli``           command-line entry points (ingest/build/infer/eval/serve)
"""

__version__ = "0.1.0"
