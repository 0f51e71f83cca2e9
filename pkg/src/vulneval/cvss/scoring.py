"""Base / temporal / environmental score computation for CVSS v2 and v3.x.

Equations, weights and rounding follow the FIRST specification of each
version.  v3.0 rounds up with a plain one-decimal ceiling while v3.1 uses
the integer-arithmetic round-up helper its specification defines; v2
rounds to the nearest tenth.  Arithmetic is kept in the order the
specifications write it so results are bit-identical with the reference
calculators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import registry
from .errors import MissingBaseMetric
from .registry import CvssVersion, MetricGroup
from .vector import CvssVector


@dataclass(frozen=True)
class ScoreBundle:
    """Scores for one vector; temporal/environmental only when their
    metric groups carry at least one defined value."""

    base: float
    temporal: float | None = None
    environmental: float | None = None


def roundup_v31(value: float) -> float:
    """Round up to one decimal, via integers to dodge float noise."""
    scaled = math.floor(value * 100000 + 0.5)
    if scaled % 10000 == 0:
        return scaled / 100000.0
    return (scaled // 10000 + 1) / 10.0


def roundup_v30(value: float) -> float:
    return math.ceil(value * 10) / 10.0


def round_v2(value: float) -> float:
    return math.floor(value * 10 + 0.5) / 10.0


# --- v3.x weights (shared by 3.0 and 3.1) ---

_W3_AV = {"N": 0.85, "A": 0.62, "L": 0.55, "P": 0.2}
_W3_AC = {"L": 0.77, "H": 0.44}
_W3_PR_UNCHANGED = {"N": 0.85, "L": 0.62, "H": 0.27}
_W3_PR_CHANGED = {"N": 0.85, "L": 0.68, "H": 0.5}
_W3_UI = {"N": 0.85, "R": 0.62}
_W3_CIA = {"H": 0.56, "L": 0.22, "N": 0.0}
_W3_E = {"X": 1.0, "H": 1.0, "F": 0.97, "P": 0.94, "U": 0.91}
_W3_RL = {"X": 1.0, "U": 1.0, "W": 0.97, "T": 0.96, "O": 0.95}
_W3_RC = {"X": 1.0, "C": 1.0, "R": 0.96, "U": 0.92}
_W3_REQ = {"X": 1.0, "H": 1.5, "M": 1.0, "L": 0.5}

# --- v2 weights ---

_W2_AV = {"L": 0.395, "A": 0.646, "N": 1.0}
_W2_AC = {"H": 0.35, "M": 0.61, "L": 0.71}
_W2_AU = {"M": 0.45, "S": 0.56, "N": 0.704}
_W2_CIA = {"N": 0.0, "P": 0.275, "C": 0.660}
_W2_E = {"U": 0.85, "POC": 0.9, "F": 0.95, "H": 1.0, "ND": 1.0}
_W2_RL = {"OF": 0.87, "TF": 0.90, "W": 0.95, "U": 1.0, "ND": 1.0}
_W2_RC = {"UC": 0.90, "UR": 0.95, "C": 1.0, "ND": 1.0}
_W2_CDP = {"N": 0.0, "L": 0.1, "LM": 0.3, "MH": 0.4, "H": 0.5, "ND": 0.0}
_W2_TD = {"N": 0.0, "L": 0.25, "M": 0.75, "H": 1.0, "ND": 1.0}
_W2_REQ = {"L": 0.5, "M": 1.0, "H": 1.51, "ND": 1.0}


def _require_base(vector: CvssVector) -> dict[str, str]:
    entries = vector.as_dict()
    missing = [
        m.abbrev
        for m in registry.metrics_for(vector.version)
        if m.group is MetricGroup.BASE
        and (
            m.abbrev not in entries
            or registry.is_not_defined(vector.version, entries[m.abbrev])
        )
    ]
    if missing:
        raise MissingBaseMetric(
            "base metrics missing for scoring: " + ", ".join(missing)
        )
    return entries


def _has_defined(vector: CvssVector, group: MetricGroup) -> bool:
    return any(
        registry.metric_def(vector.version, k).group is group
        for k, _ in vector.defined_entries()
    )


def _score_v3(vector: CvssVector) -> ScoreBundle:
    v31 = vector.version is CvssVersion.V3_1
    roundup = roundup_v31 if v31 else roundup_v30
    m = _require_base(vector)

    iss = 1 - (1 - _W3_CIA[m["C"]]) * (1 - _W3_CIA[m["I"]]) * (1 - _W3_CIA[m["A"]])
    scope_changed = m["S"] == "C"
    if scope_changed:
        impact = 7.52 * (iss - 0.029) - 3.25 * (iss - 0.02) ** 15
    else:
        impact = 6.42 * iss
    pr_table = _W3_PR_CHANGED if scope_changed else _W3_PR_UNCHANGED
    exploitability = 8.22 * _W3_AV[m["AV"]] * _W3_AC[m["AC"]] * pr_table[m["PR"]] * _W3_UI[m["UI"]]

    if impact <= 0:
        base = 0.0
    elif scope_changed:
        base = roundup(min(1.08 * (impact + exploitability), 10))
    else:
        base = roundup(min(impact + exploitability, 10))

    e = _W3_E[m.get("E", "X")]
    rl = _W3_RL[m.get("RL", "X")]
    rc = _W3_RC[m.get("RC", "X")]
    temporal = None
    if _has_defined(vector, MetricGroup.TEMPORAL):
        temporal = roundup(base * e * rl * rc)

    environmental = None
    if _has_defined(vector, MetricGroup.ENVIRONMENTAL):
        # Modified metrics default to their base counterparts when X/absent.
        def modified(mod_key: str, base_key: str) -> str:
            code = m.get(mod_key, "X")
            return m[base_key] if code == "X" else code

        mav = _W3_AV[modified("MAV", "AV")]
        mac = _W3_AC[modified("MAC", "AC")]
        mui = _W3_UI[modified("MUI", "UI")]
        ms_changed = modified("MS", "S") == "C"
        mpr = (_W3_PR_CHANGED if ms_changed else _W3_PR_UNCHANGED)[modified("MPR", "PR")]
        mc = _W3_CIA[modified("MC", "C")]
        mi = _W3_CIA[modified("MI", "I")]
        ma = _W3_CIA[modified("MA", "A")]
        cr = _W3_REQ[m.get("CR", "X")]
        ir = _W3_REQ[m.get("IR", "X")]
        ar = _W3_REQ[m.get("AR", "X")]

        miss = min(1 - (1 - cr * mc) * (1 - ir * mi) * (1 - ar * ma), 0.915)
        if ms_changed:
            if v31:
                modified_impact = 7.52 * (miss - 0.029) - 3.25 * (miss * 0.9731 - 0.02) ** 13
            else:
                modified_impact = 7.52 * (miss - 0.029) - 3.25 * (miss - 0.02) ** 15
        else:
            modified_impact = 6.42 * miss
        modified_exploitability = 8.22 * mav * mac * mpr * mui

        if modified_impact <= 0:
            environmental = 0.0
        elif ms_changed:
            environmental = roundup(
                roundup(min(1.08 * (modified_impact + modified_exploitability), 10))
                * e * rl * rc
            )
        else:
            environmental = roundup(
                roundup(min(modified_impact + modified_exploitability, 10))
                * e * rl * rc
            )

    return ScoreBundle(base, temporal, environmental)


def _score_v2(vector: CvssVector) -> ScoreBundle:
    m = _require_base(vector)

    impact = 10.41 * (
        1 - (1 - _W2_CIA[m["C"]]) * (1 - _W2_CIA[m["I"]]) * (1 - _W2_CIA[m["A"]])
    )
    exploitability = 20 * _W2_AV[m["AV"]] * _W2_AC[m["AC"]] * _W2_AU[m["Au"]]

    def base_from_impact(impact_value: float) -> float:
        f = 0.0 if impact_value == 0 else 1.176
        return round_v2(((0.6 * impact_value) + (0.4 * exploitability) - 1.5) * f)

    base = base_from_impact(impact)

    e = _W2_E[m.get("E", "ND")]
    rl = _W2_RL[m.get("RL", "ND")]
    rc = _W2_RC[m.get("RC", "ND")]
    temporal = None
    if _has_defined(vector, MetricGroup.TEMPORAL):
        temporal = round_v2(base * e * rl * rc)

    environmental = None
    if _has_defined(vector, MetricGroup.ENVIRONMENTAL):
        adjusted_impact = min(
            10,
            10.41
            * (
                1
                - (1 - _W2_CIA[m["C"]] * _W2_REQ[m.get("CR", "ND")])
                * (1 - _W2_CIA[m["I"]] * _W2_REQ[m.get("IR", "ND")])
                * (1 - _W2_CIA[m["A"]] * _W2_REQ[m.get("AR", "ND")])
            ),
        )
        adjusted_temporal = round_v2(base_from_impact(adjusted_impact) * e * rl * rc)
        cdp = _W2_CDP[m.get("CDP", "ND")]
        td = _W2_TD[m.get("TD", "ND")]
        environmental = round_v2((adjusted_temporal + (10 - adjusted_temporal) * cdp) * td)

    return ScoreBundle(base, temporal, environmental)


def score(vector: CvssVector) -> ScoreBundle:
    """Score a vector per its version's FIRST equations.

    Requires the full base metric group; temporal and environmental scores
    appear only when their groups contain at least one defined value.
    """
    if vector.version.is_v3:
        return _score_v3(vector)
    return _score_v2(vector)
