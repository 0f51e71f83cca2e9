"""Vector parsing, canonical strings, expanded text and diffs."""

import pytest
from hypothesis import given, settings

from vulneval.cvss import (
    AmbiguousVersion,
    CvssVector,
    CvssVersion,
    DuplicateMetric,
    IllegalValue,
    MetricGroup,
    NoMatchingVersion,
    UnknownMetric,
    UnrecognizedMetricName,
    UnrecognizedValue,
    VersionMismatch,
    canonicalize,
    diff_environmental,
    expand_to_text,
    infer_version,
    metrics_for,
    parse_expanded_text,
    parse_vector,
)

from .strategies import cvss_vectors

PAPER_BT_VECTOR = "AV:A/AC:H/PR:L/UI:N/S:U/C:L/I:H/A:L/E:U/RL:O/RC:C"
PAPER_BT_TEXT = (
    "Attack Vector is Adjacent. Attack Complexity is High. "
    "Privileges Required is Low. User Interaction is None. "
    "Scope is Unchanged. Confidentiality is Low. Integrity is High. "
    "Availability is Low. Exploit Code Maturity is Unproven. "
    "Remediation Level is Official Fix. Report Confidence is Confirmed."
)


class TestParseVector:
    def test_explicit_prefix(self):
        v = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        assert v.version is CvssVersion.V3_1
        assert len(v) == 8

    def test_prefix_wins_over_inference(self):
        v = parse_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        assert v.version is CvssVersion.V3_0

    def test_paper_example_infers_v31(self):
        v = parse_vector(PAPER_BT_VECTOR)
        assert v.version is CvssVersion.V3_1
        assert v.get("AV") == "A"
        assert v.get("RC") == "C"

    def test_v2_key_set_forces_v2(self):
        v = parse_vector("AV:N/AC:L/Au:N/C:P/I:P/A:P")
        assert v.version is CvssVersion.V2

    def test_v2_value_set_forces_v2(self):
        # Keys AV/AC/C/I/A exist in every version; AC:M is v2-only.
        v = parse_vector("AV:N/AC:M/Au:N/C:P/I:P/A:P")
        assert v.version is CvssVersion.V2

    def test_parenthesized_v2(self):
        v = parse_vector("(AV:N/AC:L/Au:N/C:P/I:P/A:P)")
        assert v.version is CvssVersion.V2

    def test_unknown_metric(self):
        with pytest.raises(UnknownMetric):
            parse_vector("AV:N/AC:L/ZZ:Q")

    def test_duplicate_metric(self):
        with pytest.raises(DuplicateMetric):
            parse_vector("CVSS:3.1/AV:N/AV:L/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")

    def test_illegal_value(self):
        with pytest.raises(IllegalValue):
            parse_vector("CVSS:3.1/AV:Q/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")

    def test_mixed_version_keys(self):
        with pytest.raises(AmbiguousVersion):
            parse_vector("AV:N/AC:L/Au:N/PR:N/C:P/I:P/A:P")

    def test_empty(self):
        with pytest.raises(ValueError):
            parse_vector("  ")


class TestInferVersion:
    def test_highest_version_wins(self):
        assert infer_version({"AV", "AC", "PR", "UI", "S", "C", "I", "A"}) is CvssVersion.V3_1

    def test_v2_only_key(self):
        assert infer_version({"AV", "AC", "Au", "C", "I", "A"}) is CvssVersion.V2

    def test_unknown_key(self):
        with pytest.raises(NoMatchingVersion):
            infer_version({"AV", "AC", "ZZ"})

    def test_empty_set(self):
        with pytest.raises(NoMatchingVersion):
            infer_version(set())


class TestExpandToText:
    def test_paper_base_temporal(self):
        v = parse_vector(PAPER_BT_VECTOR)
        out = expand_to_text(v, {MetricGroup.BASE, MetricGroup.TEMPORAL})
        assert out == PAPER_BT_TEXT

    def test_fill_missing_on_empty_vector(self):
        v = CvssVector.empty(CvssVersion.V3_1)
        out = expand_to_text(v, {MetricGroup.ENVIRONMENTAL}, fill_missing=True)
        sentences = [s for s in out.split(". ") if s]
        assert len(sentences) == 11
        assert all(s.rstrip(".").endswith("XXXX") for s in sentences)
        assert out.startswith("Confidentiality Requirement is XXXX.")
        assert out.endswith("Modified Availability is XXXX.")

    def test_fill_missing_keeps_present_entry_in_place(self):
        v = CvssVector.build(CvssVersion.V3_1, {"MAV": "N"})
        out = expand_to_text(v, {MetricGroup.ENVIRONMENTAL}, fill_missing=True)
        assert "Modified Attack Vector is Network." in out
        assert out.count("XXXX") == 10
        env_names = [
            m.full_name
            for m in metrics_for(CvssVersion.V3_1)
            if m.group is MetricGroup.ENVIRONMENTAL
        ]
        rendered = [s.rsplit(" is ", 1)[0] for s in out.rstrip(".").split(". ")]
        assert rendered == env_names

    def test_not_defined_entry_renders_as_xxxx(self):
        v = CvssVector.build(CvssVersion.V3_1, {"E": "X"})
        assert expand_to_text(v, {MetricGroup.TEMPORAL}) == "Exploit Code Maturity is XXXX."


class TestParseExpandedText:
    def test_paper_sentence_string(self):
        v = parse_expanded_text(PAPER_BT_TEXT)
        assert v == parse_vector(PAPER_BT_VECTOR)

    def test_xxxx_maps_to_not_defined(self):
        v = parse_expanded_text("Attack Vector is XXXX.")
        assert v.entries == (("AV", "X"),)

    def test_malformed_sentence(self):
        with pytest.raises(UnrecognizedMetricName):
            parse_expanded_text("Attack Vector maybe Network.")

    def test_unknown_value(self):
        with pytest.raises(UnrecognizedValue):
            parse_expanded_text("Attack Vector is Sideways.", CvssVersion.V3_1)

    def test_version_hint_respected(self):
        v = parse_expanded_text("Confidentiality Requirement is Medium.", CvssVersion.V2)
        assert v.version is CvssVersion.V2
        assert v.get("CR") == "M"


class TestDiffEnvironmental:
    def test_identical_vectors_diff_empty(self):
        v = parse_vector(PAPER_BT_VECTOR)
        assert len(diff_environmental(v, v)) == 0

    def test_added_entry_survives(self):
        notif = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        evalv = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H/MAV:N")
        assert diff_environmental(evalv, notif).entries == (("MAV", "N"),)

    def test_changed_value_survives(self):
        notif = parse_vector("CVSS:3.1/AV:A/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        evalv = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        assert diff_environmental(evalv, notif).entries == (("AV", "N"),)

    def test_version_mismatch(self):
        v3 = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        v2 = parse_vector("AV:N/AC:L/Au:N/C:P/I:P/A:P")
        with pytest.raises(VersionMismatch):
            diff_environmental(v3, v2)

    def test_not_defined_equals_absent(self):
        notif = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        evalv = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H/MAV:X")
        assert len(diff_environmental(evalv, notif)) == 0


class TestCanonicalize:
    def test_round_trip_string(self):
        text = "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"
        assert canonicalize(parse_vector(text)) == text

    def test_orders_unordered_input(self):
        v = CvssVector.build(
            CvssVersion.V3_1,
            [("A", "H"), ("AV", "N"), ("C", "H"), ("AC", "L"),
             ("I", "H"), ("PR", "N"), ("S", "U"), ("UI", "N")],
        )
        assert canonicalize(v) == "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"

    def test_v2_has_no_prefix(self):
        v = parse_vector("AV:N/AC:L/Au:N/C:P/I:P/A:P")
        assert canonicalize(v) == "AV:N/AC:L/Au:N/C:P/I:P/A:P"


class TestProperties:
    @given(cvss_vectors())
    @settings(max_examples=300)
    def test_parse_canonicalize_round_trip(self, vector):
        assert parse_vector(canonicalize(vector)) == vector

    @given(cvss_vectors())
    @settings(max_examples=300)
    def test_text_round_trip(self, vector):
        for groups in ({MetricGroup.BASE}, {MetricGroup.ENVIRONMENTAL}, set(MetricGroup)):
            text = expand_to_text(vector, groups, fill_missing=False)
            restricted = vector.restrict(groups)
            if not text:
                assert len(restricted) == 0
                continue
            assert parse_expanded_text(text, vector.version) == restricted

    @given(cvss_vectors())
    @settings(max_examples=200)
    def test_fill_completeness(self, vector):
        groups = {MetricGroup.ENVIRONMENTAL, MetricGroup.TEMPORAL}
        text = expand_to_text(vector, groups, fill_missing=True)
        expected = [
            m.full_name for m in metrics_for(vector.version) if m.group in groups
        ]
        rendered = [s.rsplit(" is ", 1)[0] for s in text.rstrip(".").split(". ")]
        assert rendered == expected

    @given(cvss_vectors())
    @settings(max_examples=200)
    def test_diff_laws(self, vector):
        assert len(diff_environmental(vector, vector)) == 0
        empty = CvssVector.empty(vector.version)
        assert diff_environmental(vector, empty).entries == vector.defined_entries()
        assert set(diff_environmental(vector, empty).entries) <= set(vector.entries)
