"""Regenerate the frozen CVSS score fixtures from the reference calculators.

Run from the repository root:

    python3 -m tests.oracles.generate_cvss_fixtures

Vectors are drawn with a fixed seed, so reruns are byte-identical.  The
fixture files live in tests/data/ and are committed; tests never call this
module.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from . import first_calc

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

V3_BASE = {
    "AV": "NALP", "AC": "LH", "PR": "NLH", "UI": "NR", "S": "UC",
    "C": "HLN", "I": "HLN", "A": "HLN",
}
V3_TEMPORAL = {"E": "XHFPU", "RL": "XUWTO", "RC": "XCRU"}
V3_ENV = {
    "CR": "XHML", "IR": "XHML", "AR": "XHML",
    "MAV": "XNALP", "MAC": "XLH", "MPR": "XNLH", "MUI": "XNR",
    "MS": "XUC", "MC": "XHLN", "MI": "XHLN", "MA": "XHLN",
}

V2_BASE = {"AV": ["L", "A", "N"], "AC": ["H", "M", "L"], "Au": ["M", "S", "N"],
           "C": ["N", "P", "C"], "I": ["N", "P", "C"], "A": ["N", "P", "C"]}
V2_TEMPORAL = {"E": ["U", "POC", "F", "H", "ND"],
               "RL": ["OF", "TF", "W", "U", "ND"],
               "RC": ["UC", "UR", "C", "ND"]}
V2_ENV = {"CDP": ["N", "L", "LM", "MH", "H", "ND"],
          "TD": ["N", "L", "M", "H", "ND"],
          "CR": ["L", "M", "H", "ND"], "IR": ["L", "M", "H", "ND"],
          "AR": ["L", "M", "H", "ND"]}


def _draw(rng: random.Random, table: dict) -> dict:
    return {key: rng.choice(list(values)) for key, values in table.items()}


def _sample_v3(rng: random.Random) -> dict:
    metrics = _draw(rng, V3_BASE)
    shape = rng.random()
    if shape > 0.3:
        metrics.update(_draw(rng, V3_TEMPORAL))
    if shape > 0.55:
        metrics.update(_draw(rng, V3_ENV))
    return metrics


def _sample_v2(rng: random.Random) -> dict:
    metrics = _draw(rng, V2_BASE)
    shape = rng.random()
    if shape > 0.3:
        metrics.update(_draw(rng, V2_TEMPORAL))
    if shape > 0.55:
        metrics.update(_draw(rng, V2_ENV))
    return metrics


def _vector_string(metrics: dict, order: list[str], prefix: str = "") -> str:
    return prefix + "/".join(f"{k}:{metrics[k]}" for k in order if k in metrics)


def _not_defined(code: str, sentinel: str) -> bool:
    return code == sentinel


def _defined_any(metrics: dict, keys, sentinel: str) -> bool:
    return any(k in metrics and not _not_defined(metrics[k], sentinel) for k in keys)


def generate() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240615)

    v3_order = list(V3_BASE) + list(V3_TEMPORAL) + list(V3_ENV)
    v2_order = list(V2_BASE) + list(V2_TEMPORAL) + list(V2_ENV)

    jobs = [
        ("cvss_scores_v31.json", 1200, _sample_v3, first_calc.reference_v31,
         v3_order, "CVSS:3.1/", "X", list(V3_TEMPORAL), list(V3_ENV)),
        ("cvss_scores_v30.json", 300, _sample_v3, first_calc.reference_v30,
         v3_order, "CVSS:3.0/", "X", list(V3_TEMPORAL), list(V3_ENV)),
        ("cvss_scores_v2.json", 300, _sample_v2, first_calc.reference_v2,
         v2_order, "", "ND", list(V2_TEMPORAL), list(V2_ENV)),
    ]
    for name, count, sampler, reference, order, prefix, sentinel, tkeys, ekeys in jobs:
        rows = []
        for _ in range(count):
            metrics = sampler(rng)
            base, temporal, environmental = reference(metrics)
            rows.append({
                "vector": _vector_string(metrics, order, prefix),
                "base": base,
                "temporal": temporal if _defined_any(metrics, tkeys, sentinel) else None,
                "environmental": (
                    environmental if _defined_any(metrics, ekeys, sentinel) else None
                ),
            })
        path = DATA_DIR / name
        path.write_text(json.dumps(rows, indent=0) + "\n")
        print(f"wrote {path} ({len(rows)} vectors)")


if __name__ == "__main__":
    generate()
