"""Score computation against the reference-calculator oracle."""

import pytest
from hypothesis import given, settings

from vulneval.cvss import MissingBaseMetric, parse_vector, score

from .oracles import first_calc
from .strategies import cvss_vectors

# Expected values below were computed with tests.oracles.first_calc and
# frozen here.
CASES = [
    ("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H", (9.8, None, None)),
    ("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N", (0.0, None, None)),
    # The notification vector of the worked example prompt.
    ("AV:A/AC:H/PR:L/UI:N/S:U/C:L/I:H/A:L/E:U/RL:O/RC:C", (5.9, 5.2, None)),
    ("CVSS:3.1/AV:N/AC:H/PR:N/UI:R/S:C/C:H/I:H/A:H", (8.3, None, None)),
    ("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H", (9.8, None, None)),
    ("AV:N/AC:L/Au:N/C:P/I:P/A:P", (7.5, None, None)),
    ("AV:N/AC:L/Au:N/C:C/I:C/A:C", (10.0, None, None)),
    (
        "AV:N/AC:L/Au:N/C:P/I:P/A:P/E:POC/RL:OF/RC:C/CDP:L/TD:H/CR:M/IR:M/AR:M",
        (7.5, 5.9, 6.3),
    ),
    (
        "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:C/C:H/I:H/A:H/E:F/RL:W/RC:C/"
        "CR:H/IR:H/AR:H/MAV:A/MAC:H/MPR:L/MUI:R/MS:U/MC:L/MI:L/MA:L",
        (10.0, 9.5, 5.1),
    ),
]


@pytest.mark.parametrize("vector_text,expected", CASES)
def test_known_scores(vector_text, expected):
    bundle = score(parse_vector(vector_text))
    assert (bundle.base, bundle.temporal, bundle.environmental) == expected


def test_zero_impact_forces_zero_base():
    bundle = score(parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N"))
    assert bundle.base == 0.0


def test_missing_base_metric():
    with pytest.raises(MissingBaseMetric):
        score(parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H"))


def _oracle_for(vector):
    metrics = vector.as_dict()
    if vector.version.value == "3.1":
        return first_calc.reference_v31(metrics)
    if vector.version.value == "3.0":
        return first_calc.reference_v30(metrics)
    return first_calc.reference_v2(metrics)


@given(cvss_vectors())
@settings(max_examples=400)
def test_matches_reference_calculator(vector):
    bundle = score(vector)
    base, temporal, environmental = _oracle_for(vector)
    assert bundle.base == base
    if bundle.temporal is not None:
        assert bundle.temporal == temporal
    if bundle.environmental is not None:
        assert bundle.environmental == environmental


@given(cvss_vectors())
@settings(max_examples=200)
def test_scores_are_tenths_and_temporal_bounded(vector):
    bundle = score(vector)
    for value in (bundle.base, bundle.temporal, bundle.environmental):
        if value is not None:
            assert 0.0 <= value <= 10.0
            assert round(value * 10) == pytest.approx(value * 10)
    if vector.version.is_v3 and bundle.temporal is not None:
        assert bundle.temporal <= bundle.base
