"""ROUGE-L, micro-F1 and per-metric vector scoring."""

import functools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vulneval.cvss import parse_vector
from vulneval.evalmetrics import (
    ConfusionMatrix,
    LengthMismatch,
    MetricReport,
    build_report,
    emit_report,
    micro_f1,
    rouge_l,
    rouge_words,
    vector_component_scores,
    whole_vector_match_rate,
)


def lcs_oracle(a, b):
    """Independent LCS: plain memoized recursion over the definition."""

    @functools.cache
    def rec(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + rec(i + 1, j + 1)
        return max(rec(i + 1, j), rec(i, j + 1))

    return rec(0, 0)


def rouge_oracle(candidate, reference):
    cand, ref = rouge_words(candidate), rouge_words(reference)
    if not cand and not ref:
        return 1.0
    if not cand or not ref:
        return 0.0
    lcs = lcs_oracle(tuple(cand), tuple(ref))
    if lcs == 0:
        return 0.0
    p, r = lcs / len(cand), lcs / len(ref)
    return 2 * p * r / (p + r)


class TestRougeL:
    def test_identical(self):
        assert rouge_l("the quick brown fox", "the quick brown fox") == 1.0

    def test_disjoint(self):
        assert rouge_l("alpha beta", "gamma delta") == 0.0

    def test_hand_fixture(self):
        # LCS("the cat sat on the mat", "the cat was on the mat") = 5,
        # P = R = 5/6, F1 = 5/6.
        value = rouge_l("the cat sat on the mat", "the cat was on the mat")
        assert value == pytest.approx(0.8333, abs=1e-4)

    def test_empty_cases(self):
        assert rouge_l("", "") == 1.0
        assert rouge_l("", "words here") == 0.0
        assert rouge_l("words here", "") == 0.0

    def test_punctuation_and_case_normalized(self):
        assert rouge_l("The CAT sat.", "the cat sat") == 1.0

    @given(
        st.text(alphabet="abcd ", max_size=60),
        st.text(alphabet="abcd ", max_size=60),
    )
    @settings(max_examples=200, deadline=None)
    def test_matches_oracle_and_symmetry(self, a, b):
        assert rouge_l(a, b) == pytest.approx(rouge_oracle(a, b), abs=1e-9)
        assert rouge_l(a, b) == pytest.approx(rouge_l(b, a), abs=1e-12)


class TestMicroF1:
    def test_all_correct(self):
        assert micro_f1(["a", "b"], ["a", "b"]) == 1.0

    def test_two_thirds(self):
        predictions = ["Affected", "Affected", "NotAffected"]
        gold = ["Affected", "NotAffected", "NotAffected"]
        # Confusion-count oracle: per label TP/FP/FN ->
        # Affected: TP=1 FP=1 FN=0; NotAffected: TP=1 FP=0 FN=1
        # micro P = 2/3, micro R = 2/3 -> F1 = 2/3.
        assert micro_f1(predictions, gold) == pytest.approx(2 / 3)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            micro_f1(["a"], ["a", "b"])

    @given(st.lists(st.sampled_from("abcde"), min_size=1, max_size=60).flatmap(
        lambda gold: st.tuples(
            st.just(gold),
            st.lists(st.sampled_from("abcde"), min_size=len(gold), max_size=len(gold)),
        )
    ))
    @settings(max_examples=200)
    def test_equals_accuracy_for_single_label(self, pair):
        gold, predictions = pair
        accuracy = sum(p == g for p, g in zip(predictions, gold)) / len(gold)
        assert micro_f1(predictions, gold) == pytest.approx(accuracy)

    @given(st.lists(st.sampled_from("abc"), min_size=1, max_size=40).flatmap(
        lambda gold: st.tuples(
            st.just(gold),
            st.lists(st.sampled_from("abc"), min_size=len(gold), max_size=len(gold)),
        )
    ))
    @settings(max_examples=100, deadline=None)
    def test_matches_sklearn(self, pair):
        from sklearn.metrics import f1_score

        gold, predictions = pair
        expected = f1_score(gold, predictions, average="micro")
        assert micro_f1(predictions, gold) == pytest.approx(expected)


V31_GOLD = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N/CR:H/MAV:N/MC:H")
V31_PRED_GOOD = parse_vector("CVSS:3.1/CR:H/MAV:N/MC:H")
V31_PRED_PARTIAL = parse_vector("CVSS:3.1/CR:H/MAV:A")
V2_GOLD = parse_vector("AV:N/AC:L/Au:N/C:P/I:P/A:P/CDP:L/TD:M/CR:M")


class TestVectorComponentScores:
    def test_identical_lists_all_ones(self):
        matrices = vector_component_scores([V31_GOLD, V31_GOLD], [V31_GOLD, V31_GOLD])
        assert len(matrices) == 11
        assert all(m.micro_f1() == 1.0 for m in matrices.values())

    def test_missing_metric_counts_as_xxxx_cell(self):
        matrices = vector_component_scores([V31_PRED_PARTIAL], [V31_GOLD])
        mav = matrices["Modified Attack Vector"]
        assert mav.counts[("Network", "Adjacent")] == 1
        mc = matrices["Modified Confidentiality"]
        assert mc.counts[("High", "XXXX")] == 1

    def test_none_prediction_is_all_xxxx(self):
        matrices = vector_component_scores([None], [V31_GOLD])
        assert matrices["Confidentiality Requirement"].counts[("High", "XXXX")] == 1

    def test_three_pair_fixture_against_counting_oracle(self):
        predictions = [V31_PRED_GOOD, V31_PRED_PARTIAL, None]
        gold = [V31_GOLD, V31_GOLD, V31_GOLD]
        matrices = vector_component_scores(predictions, gold)

        # Oracle: count matches per metric by explicit lookup.
        def label(vector, abbrev):
            if vector is None:
                return "XXXX"
            code = vector.get(abbrev)
            names = {"H": "High", "N": "Network", "A": "Adjacent"}
            return names.get(code, "XXXX") if code else "XXXX"

        for name, abbrev in [
            ("Confidentiality Requirement", "CR"),
            ("Modified Attack Vector", "MAV"),
            ("Modified Confidentiality", "MC"),
        ]:
            expected_correct = sum(
                label(p, abbrev) == label(g, abbrev)
                for p, g in zip(predictions, gold)
            )
            assert matrices[name].micro_f1() == pytest.approx(expected_correct / 3)

    def test_mixed_versions_use_na(self):
        matrices = vector_component_scores([V2_GOLD, V31_PRED_GOOD], [V2_GOLD, V31_GOLD])
        cdp = matrices["Collateral Damage Potential"]
        # CDP is not a v3.1 metric: the v3.1 pair lands in the N/A-N/A cell.
        assert cdp.counts[("N/A", "N/A")] == 1
        assert cdp.counts[("Low", "Low")] == 1
        # CR exists in both versions and collapses into one row.
        cr = matrices["Confidentiality Requirement"]
        assert cr.total == 2

    def test_row_sums_equal_gold_counts(self):
        matrices = vector_component_scores(
            [V31_PRED_GOOD, V31_PRED_PARTIAL, None],
            [V31_GOLD, V31_GOLD, V31_GOLD],
        )
        for matrix in matrices.values():
            assert matrix.total == 3
            for label in matrix.labels:
                assert matrix.gold_count(label) == sum(
                    n for (g, _), n in matrix.counts.items() if g == label
                )

    def test_total_counts(self):
        matrices = vector_component_scores(
            [V31_PRED_GOOD, None], [V31_GOLD, V31_GOLD]
        )
        total = sum(m.total for m in matrices.values())
        assert total == 2 * 11

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            vector_component_scores([None], [])


class TestWholeVectorMatch:
    def test_exact_environmental_match(self):
        assert whole_vector_match_rate([V31_PRED_GOOD], [V31_GOLD]) == 1.0

    def test_partial_is_zero(self):
        assert whole_vector_match_rate([V31_PRED_PARTIAL], [V31_GOLD]) == 0.0

    def test_no_gold_vectors(self):
        assert whole_vector_match_rate([None], [None]) is None


class TestEmitReport:
    def _report(self):
        return build_report(
            internal_pairs=[("same text", "same text")],
            customer_pairs=[("a b", "a c")],
            category_pairs=[("Affected", "Affected"), ("NotAffected", "Affected")],
            justification_pairs=[("NA", "NA"), ("Other", "NA")],
            vector_pairs=[(V31_PRED_GOOD, V31_GOLD)],
        )

    def test_golden_json(self, tmp_path):
        report = self._report()
        json_path, csv_path = emit_report(report, tmp_path)
        payload = json.loads(json_path.read_text())
        assert payload["micro_f1"]["category"] == 0.5
        assert payload["rouge_l"]["internal_comment"] == 1.0
        assert payload["vector"]["per_metric_micro_f1"]["Modified Attack Vector"] == 1.0
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "metric,micro_f1,support"
        assert len(lines) == 1 + 11

    def test_rerun_byte_identical(self, tmp_path):
        report = self._report()
        emit_report(report, tmp_path / "a")
        emit_report(report, tmp_path / "b")
        assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()
        assert (tmp_path / "a" / "vector_metrics.csv").read_bytes() == (tmp_path / "b" / "vector_metrics.csv").read_bytes()

    def test_empty_inputs_give_null_scores(self, tmp_path):
        report = build_report(
            internal_pairs=[], customer_pairs=[], category_pairs=[],
            justification_pairs=[], vector_pairs=[],
        )
        json_path, _ = emit_report(report, tmp_path)
        payload = json.loads(json_path.read_text())
        assert payload["pair_count"] == 0
        assert payload["micro_f1"]["category"] is None
        assert payload["rouge_l"]["internal_comment"] is None
