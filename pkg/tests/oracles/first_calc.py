"""Independent CVSS reference calculators for oracle checks.

These are deliberately literal transcriptions of the FIRST reference
calculator scripts (cvsscalc31.js / cvsscalc30.js and the v2 equations),
kept free of any code from the package under test.  Inputs are plain
metric-code dicts; outputs are (base, temporal, environmental) floats.
Absent optional metrics must simply be missing from the dict.
"""

from __future__ import annotations

import math

# ---------------------------------------------------------------------------
# CVSS v3.x metric weights, as in the CVSSVersion.Weight table of the
# reference JavaScript.
# ---------------------------------------------------------------------------

WEIGHT3 = {
    "AV": {"N": 0.85, "A": 0.62, "L": 0.55, "P": 0.2},
    "AC": {"H": 0.44, "L": 0.77},
    "PR": {
        "U": {"N": 0.85, "L": 0.62, "H": 0.27},
        "C": {"N": 0.85, "L": 0.68, "H": 0.5},
    },
    "UI": {"N": 0.85, "R": 0.62},
    "CIA": {"N": 0, "L": 0.22, "H": 0.56},
    "E": {"X": 1, "U": 0.91, "P": 0.94, "F": 0.97, "H": 1},
    "RL": {"X": 1, "O": 0.95, "T": 0.96, "W": 0.97, "U": 1},
    "RC": {"X": 1, "U": 0.92, "R": 0.96, "C": 1},
    "CIAR": {"X": 1, "L": 0.5, "M": 1, "H": 1.5},
}


def _roundup31(value):
    # JS Math.round rounds halves up; Python's round() is banker's.
    int_input = math.floor(value * 100000 + 0.5)
    if int_input % 10000 == 0:
        return int_input / 100000
    return (math.floor(int_input / 10000) + 1) / 10


def _roundup30(value):
    return math.ceil(value * 10) / 10


def _calculate_v3(metrics, version):
    roundup = _roundup31 if version == "3.1" else _roundup30
    AV = WEIGHT3["AV"][metrics["AV"]]
    AC = WEIGHT3["AC"][metrics["AC"]]
    PR = WEIGHT3["PR"][metrics["S"]][metrics["PR"]]
    UI = WEIGHT3["UI"][metrics["UI"]]
    C = WEIGHT3["CIA"][metrics["C"]]
    I = WEIGHT3["CIA"][metrics["I"]]
    A = WEIGHT3["CIA"][metrics["A"]]
    E = WEIGHT3["E"][metrics.get("E", "X")]
    RL = WEIGHT3["RL"][metrics.get("RL", "X")]
    RC = WEIGHT3["RC"][metrics.get("RC", "X")]

    iss = 1 - ((1 - C) * (1 - I) * (1 - A))
    if metrics["S"] == "U":
        impact = 6.42 * iss
    else:
        impact = 7.52 * (iss - 0.029) - 3.25 * math.pow(iss - 0.02, 15)
    exploitability = 8.22 * AV * AC * PR * UI

    if impact <= 0:
        base_score = 0.0
    elif metrics["S"] == "U":
        base_score = roundup(min(exploitability + impact, 10))
    else:
        base_score = roundup(min(1.08 * (exploitability + impact), 10))

    temporal_score = roundup(base_score * E * RL * RC)

    # Environmental: modified metrics fall back to their base equivalents
    # when set to X or omitted.
    def mval(key, base_key):
        value = metrics.get(key, "X")
        return metrics[base_key] if value == "X" else value

    MAV = WEIGHT3["AV"][mval("MAV", "AV")]
    MAC = WEIGHT3["AC"][mval("MAC", "AC")]
    MS = mval("MS", "S")
    MPR = WEIGHT3["PR"][MS][mval("MPR", "PR")]
    MUI = WEIGHT3["UI"][mval("MUI", "UI")]
    MC = WEIGHT3["CIA"][mval("MC", "C")]
    MI = WEIGHT3["CIA"][mval("MI", "I")]
    MA = WEIGHT3["CIA"][mval("MA", "A")]
    CR = WEIGHT3["CIAR"][metrics.get("CR", "X")]
    IR = WEIGHT3["CIAR"][metrics.get("IR", "X")]
    AR = WEIGHT3["CIAR"][metrics.get("AR", "X")]

    miss = min(1 - ((1 - CR * MC) * (1 - IR * MI) * (1 - AR * MA)), 0.915)
    if MS == "U":
        modified_impact = 6.42 * miss
    elif version == "3.1":
        modified_impact = 7.52 * (miss - 0.029) - 3.25 * math.pow(miss * 0.9731 - 0.02, 13)
    else:
        modified_impact = 7.52 * (miss - 0.029) - 3.25 * math.pow(miss - 0.02, 15)
    modified_exploitability = 8.22 * MAV * MAC * MPR * MUI

    if modified_impact <= 0:
        env_score = 0.0
    elif MS == "U":
        env_score = roundup(
            roundup(min(modified_impact + modified_exploitability, 10)) * E * RL * RC
        )
    else:
        env_score = roundup(
            roundup(min(1.08 * (modified_impact + modified_exploitability), 10))
            * E * RL * RC
        )

    return base_score, temporal_score, env_score


def reference_v31(metrics):
    return _calculate_v3(metrics, "3.1")


def reference_v30(metrics):
    return _calculate_v3(metrics, "3.0")


# ---------------------------------------------------------------------------
# CVSS v2 (equations of the v2 complete guide, NVD calculator constants).
# ---------------------------------------------------------------------------

WEIGHT2 = {
    "AV": {"L": 0.395, "A": 0.646, "N": 1.0},
    "AC": {"H": 0.35, "M": 0.61, "L": 0.71},
    "Au": {"M": 0.45, "S": 0.56, "N": 0.704},
    "CIA": {"N": 0.0, "P": 0.275, "C": 0.660},
    "E": {"U": 0.85, "POC": 0.9, "F": 0.95, "H": 1.0, "ND": 1.0},
    "RL": {"OF": 0.87, "TF": 0.90, "W": 0.95, "U": 1.0, "ND": 1.0},
    "RC": {"UC": 0.90, "UR": 0.95, "C": 1.0, "ND": 1.0},
    "CDP": {"N": 0.0, "L": 0.1, "LM": 0.3, "MH": 0.4, "H": 0.5, "ND": 0.0},
    "TD": {"N": 0.0, "L": 0.25, "M": 0.75, "H": 1.0, "ND": 1.0},
    "CIAR": {"L": 0.5, "M": 1.0, "H": 1.51, "ND": 1.0},
}


def _round2(value):
    return math.floor(value * 10 + 0.5) / 10


def reference_v2(metrics):
    C = WEIGHT2["CIA"][metrics["C"]]
    I = WEIGHT2["CIA"][metrics["I"]]
    A = WEIGHT2["CIA"][metrics["A"]]
    impact = 10.41 * (1 - (1 - C) * (1 - I) * (1 - A))
    exploitability = (
        20 * WEIGHT2["AV"][metrics["AV"]] * WEIGHT2["AC"][metrics["AC"]]
        * WEIGHT2["Au"][metrics["Au"]]
    )

    def f(impact_value):
        return 0.0 if impact_value == 0 else 1.176

    base_score = _round2(((0.6 * impact) + (0.4 * exploitability) - 1.5) * f(impact))

    E = WEIGHT2["E"][metrics.get("E", "ND")]
    RL = WEIGHT2["RL"][metrics.get("RL", "ND")]
    RC = WEIGHT2["RC"][metrics.get("RC", "ND")]
    temporal_score = _round2(base_score * E * RL * RC)

    CR = WEIGHT2["CIAR"][metrics.get("CR", "ND")]
    IR = WEIGHT2["CIAR"][metrics.get("IR", "ND")]
    AR = WEIGHT2["CIAR"][metrics.get("AR", "ND")]
    adjusted_impact = min(10, 10.41 * (1 - (1 - C * CR) * (1 - I * IR) * (1 - A * AR)))
    adjusted_base = _round2(
        ((0.6 * adjusted_impact) + (0.4 * exploitability) - 1.5) * f(adjusted_impact)
    )
    adjusted_temporal = _round2(adjusted_base * E * RL * RC)
    CDP = WEIGHT2["CDP"][metrics.get("CDP", "ND")]
    TD = WEIGHT2["TD"][metrics.get("TD", "ND")]
    env_score = _round2((adjusted_temporal + (10 - adjusted_temporal) * CDP) * TD)

    return base_score, temporal_score, env_score
