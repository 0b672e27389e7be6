import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from scc import evaluation as ev

WORDS = ["the", "cat", "sat", "on", "mat", "dog", "ran", "fast", "token", "owner"]

text_strategy = st.lists(st.sampled_from(WORDS), min_size=1, max_size=10).map(" ".join)


class TestTokenize:
    def test_lowercase_and_split(self):
        assert ev.metric_tokenize("The Cat") == ["the", "cat"]

    def test_punctuation_detached(self):
        assert ev.metric_tokenize("hello, world.") == ["hello", ",", "world", "."]

    def test_empty(self):
        assert ev.metric_tokenize("   ") == []


class TestBleu:
    def test_identity_is_100(self):
        texts = ["returns the owner balance", "burns tokens from the caller account"]
        assert ev.bleu4(texts, texts) == pytest.approx(100.0)

    def test_disjoint_is_zero(self):
        assert ev.bleu4(["a b c d e"], ["v w x y z"]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ev.EvalError):
            ev.bleu4(["a"], ["a", "b"])

    def test_empty_input(self):
        with pytest.raises(ev.EvalError):
            ev.bleu4([], [])

    def test_cat_mat_pair(self):
        # no shared 4-gram, so the unsmoothed corpus score collapses to zero
        assert ev.bleu4(["the cat sat on the mat"], ["the cat is on the mat"]) == 0.0
        # smoothed sentence variant: p = (5/6, 4/6, 2/5, 1/4), equal lengths
        import math

        expected = 100.0 * math.exp(
            (math.log(5 / 6) + math.log(4 / 6) + math.log(2 / 5) + math.log(1 / 4)) / 4
        )
        got = ev.sentence_bleu4("the cat sat on the mat", "the cat is on the mat")
        assert got == pytest.approx(expected, abs=1e-9)

    def test_sentence_smoothing_nonzero(self):
        # shares unigrams only; smoothed per-sentence score stays positive
        assert ev.sentence_bleu4("the dog", "the cat") > 0.0
        assert ev.bleu4(["the dog"], ["the cat"]) == 0.0

    def test_case_insensitive(self):
        assert ev.bleu4(["The Cat Sat On Mats"], ["the cat sat on mats"]) == pytest.approx(100.0)


class TestRouge:
    def test_identity_is_100(self):
        text = "transfers tokens to the recipient"
        assert ev.rouge_n(text, text, 1) == pytest.approx(100.0)
        assert ev.rouge_n(text, text, 2) == pytest.approx(100.0)
        assert ev.rouge_l(text, text) == pytest.approx(100.0)

    def test_disjoint_is_zero(self):
        assert ev.rouge_n("a b", "x y", 1) == 0.0
        assert ev.rouge_n("a b", "x y", 2) == 0.0
        assert ev.rouge_l("a b", "x y") == 0.0

    def test_rouge1_worked_value(self):
        # precision 2/2, recall 2/3 -> F1 = 80.0
        assert ev.rouge_n("the cat", "the cat sat", 1) == pytest.approx(80.0)

    def test_rougel_worked_value(self):
        # LCS "a c d": precision 3/4, recall 1 -> F1 = 6/7
        assert ev.rouge_l("a b c d", "a c d") == pytest.approx(600 / 7)

    def test_empty_sides_score_zero(self):
        assert ev.rouge_n("", "", 1) == 0.0
        assert ev.rouge_n("a", "", 1) == 0.0
        assert ev.rouge_l("", "a") == 0.0

    def test_bad_order(self):
        with pytest.raises(ev.EvalError):
            ev.rouge_n("a", "a", 3)

    @settings(max_examples=200)
    @given(
        st.lists(st.sampled_from(WORDS), min_size=1, max_size=10, unique=True).map(" ".join),
        st.lists(st.sampled_from(WORDS), min_size=1, max_size=10, unique=True).map(" ".join),
    )
    def test_rouge1_dominates_rouge2(self, cand, ref):
        # containment holds for duplicate-free texts; with repeated tokens on
        # both sides, clipping can push the bigram F1 above the unigram F1
        # (e.g. "the cat the" vs "cat the cat")
        r1 = ev.rouge_n(cand, ref, 1)
        r2 = ev.rouge_n(cand, ref, 2)
        assert 0.0 <= r2 <= r1 <= 100.0

    def test_rouge2_can_exceed_rouge1_with_repeats(self):
        cand, ref = "the cat the", "cat the cat"
        assert ev.rouge_n(cand, ref, 2) > ev.rouge_n(cand, ref, 1)

    @settings(max_examples=200)
    @given(text_strategy, text_strategy)
    def test_rougel_bounded_by_rouge1(self, cand, ref):
        assert ev.rouge_l(cand, ref) <= ev.rouge_n(cand, ref, 1) + 1e-9

    @settings(max_examples=100)
    @given(text_strategy, text_strategy)
    def test_whitespace_and_case_invariance(self, cand, ref):
        noisy_cand = "  " + cand.upper().replace(" ", "   ") + " "
        assert ev.rouge_l(noisy_cand, ref) == pytest.approx(ev.rouge_l(cand, ref))
        assert ev.rouge_n(noisy_cand, ref, 1) == pytest.approx(ev.rouge_n(cand, ref, 1))


@pytest.fixture
def fixture(fixtures_dir):
    return json.loads((fixtures_dir / "metric_fixture.json").read_text())


class TestFixtureEquivalence:
    def test_at_least_20_pairs(self, fixture):
        assert len(fixture["pairs"]) >= 20

    def test_per_pair_rouge(self, fixture):
        for pair in fixture["pairs"]:
            c, r = pair["candidate"], pair["reference"]
            assert ev.rouge_n(c, r, 1) == pytest.approx(pair["rouge1"], abs=1e-4)
            assert ev.rouge_n(c, r, 2) == pytest.approx(pair["rouge2"], abs=1e-4)
            assert ev.rouge_l(c, r) == pytest.approx(pair["rougeL"], abs=1e-4)

    def test_corpus_values(self, fixture):
        cands = [p["candidate"] for p in fixture["pairs"]]
        refs = [p["reference"] for p in fixture["pairs"]]
        report = ev.metric_report(cands, refs)
        assert report.bleu4 == pytest.approx(fixture["corpus_bleu4"], abs=1e-4)
        assert report.rouge1 == pytest.approx(fixture["mean_rouge1"], abs=1e-4)
        assert report.rouge2 == pytest.approx(fixture["mean_rouge2"], abs=1e-4)
        assert report.rougeL == pytest.approx(fixture["mean_rougeL"], abs=1e-4)

    def test_report_shape(self, fixture):
        cands = [p["candidate"] for p in fixture["pairs"]]
        refs = [p["reference"] for p in fixture["pairs"]]
        report = ev.metric_report(cands, refs, ids=[f"q{i}" for i in range(len(cands))])
        payload = report.to_dict()
        assert payload["n"] == len(cands)
        assert [s["id"] for s in payload["per_sample"]] == [f"q{i}" for i in range(len(cands))]
        for score in ("bleu4", "rouge1", "rouge2", "rougeL"):
            assert 0.0 <= payload[score] <= 100.0


def enumeration_wilcoxon(scores_a, scores_b):
    """Independent oracle: full enumeration of sign assignments."""
    diffs = [a - b for a, b in zip(scores_a, scores_b) if a != b]
    ranks = ev._average_ranks([abs(d) for d in diffs])
    observed = sum(r for r, d in zip(ranks, diffs) if d > 0)
    mean = sum(ranks) / 2
    extreme = 0
    for signs in itertools.product((0, 1), repeat=len(ranks)):
        w = sum(r for r, s in zip(ranks, signs) if s)
        if abs(w - mean) >= abs(observed - mean) - 1e-9:
            extreme += 1
    return extreme / 2 ** len(ranks)


class TestWilcoxon:
    def test_all_zero_differences(self):
        with pytest.raises(ev.EvalError, match="no nonzero differences"):
            ev.wilcoxon_signed_rank([1.0] * 10, [1.0] * 10)

    def test_too_few_differences(self):
        with pytest.raises(ev.EvalError, match="too few"):
            ev.wilcoxon_signed_rank([1, 2, 3, 4], [0, 1, 2, 3])

    def test_strict_dominance_is_significant(self):
        a = [float(i + 2) for i in range(20)]
        b = [float(i) for i in range(20)]
        assert ev.wilcoxon_signed_rank(a, b) < 0.05

    def test_length_8_matches_enumeration(self):
        cases = [
            ([5.0, 3.0, 8.0, 1.0, 7.0, 2.0, 9.0, 4.0],
             [4.0, 4.0, 6.0, 2.0, 3.0, 1.0, 5.0, 6.0]),
            ([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
             [1.5, 1.0, 4.0, 3.0, 6.0, 5.0, 8.0, 7.5]),
            # repeated |difference| values exercise tied-rank averaging
            ([2.0, 2.0, 2.0, 0.0, 0.0, 0.0, 5.0, 5.0],
             [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
        ]
        for a, b in cases:
            assert ev.wilcoxon_signed_rank(a, b) == pytest.approx(
                enumeration_wilcoxon(a, b), abs=1e-6
            )

    def test_normal_branch_matches_scipy(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        rng = random.Random(7)
        a = [rng.uniform(0, 100) for _ in range(40)]
        b = [x + rng.uniform(-10, 12) for x in a]
        expected = scipy_stats.wilcoxon(
            a, b, zero_method="wilcox", correction=True, mode="approx"
        ).pvalue
        assert ev.wilcoxon_signed_rank(a, b) == pytest.approx(expected, abs=1e-9)

    def test_symmetric_in_direction(self):
        rng = random.Random(3)
        a = [rng.uniform(0, 10) for _ in range(15)]
        b = [rng.uniform(0, 10) for _ in range(15)]
        assert ev.wilcoxon_signed_rank(a, b) == pytest.approx(
            ev.wilcoxon_signed_rank(b, a)
        )

    def test_p_value_in_unit_interval(self):
        rng = random.Random(11)
        for _ in range(10):
            m = rng.randint(8, 40)
            a = [rng.uniform(0, 1) for _ in range(m)]
            b = [rng.uniform(0, 1) for _ in range(m)]
            p = ev.wilcoxon_signed_rank(a, b)
            assert 0.0 < p <= 1.0


class TestSampleSize:
    def test_published_population(self):
        assert ev.sample_size(2972) == 340

    def test_large_population_limit(self):
        assert ev.sample_size(10**9) == 384

    def test_single_item(self):
        assert ev.sample_size(1) == 1

    def test_monotone_in_size(self):
        previous = 0
        for size in (10, 100, 1000, 10000, 100000):
            value = ev.sample_size(size)
            assert value >= previous
            previous = value

    def test_monotone_in_margin(self):
        assert ev.sample_size(5000, e=0.01) >= ev.sample_size(5000, e=0.05)
        assert ev.sample_size(5000, e=0.05) >= ev.sample_size(5000, e=0.10)

    def test_invalid_params(self):
        with pytest.raises(ev.EvalError):
            ev.sample_size(0)
        with pytest.raises(ev.EvalError):
            ev.sample_size(100, e=1.5)
        with pytest.raises(ev.EvalError):
            ev.sample_size(100, z=-1.0)


def questionnaire_inputs(n_items=6):
    items = [
        {"id": f"q{i}", "code": f"function f{i}() public {{}}", "comment": f"does thing {i}"}
        for i in range(n_items)
    ]
    outputs = {
        "ours": {f"q{i}": f"generated comment {i}" for i in range(n_items)},
        "baseline": {f"q{i}": f"baseline comment {i}" for i in range(n_items)},
    }
    return items, outputs


class TestQuestionnaire:
    def test_forms_and_blinding(self):
        items, outputs = questionnaire_inputs()
        forms, label_map = ev.export_questionnaire(items, outputs, 3, seed=0)
        assert len(forms) == 3
        for form in forms:
            assert set(form["comments"]) == {"comment_A", "comment_B"}
            slots = label_map[form["item_id"]]
            for slot, approach in slots.items():
                assert form["comments"][slot] == outputs[approach][form["item_id"]]

    def test_seed_reproducible(self):
        items, outputs = questionnaire_inputs()
        a = ev.export_questionnaire(items, outputs, 4, seed=5)
        b = ev.export_questionnaire(items, outputs, 4, seed=5)
        assert a == b

    def test_missing_output_named(self):
        items, outputs = questionnaire_inputs()
        del outputs["baseline"]["q2"]
        with pytest.raises(ev.EvalError, match="q2"):
            ev.export_questionnaire(items, outputs, len(items), seed=0)

    def test_oversample_rejected(self):
        items, outputs = questionnaire_inputs(3)
        with pytest.raises(ev.EvalError):
            ev.export_questionnaire(items, outputs, 4, seed=0)


class TestRatings:
    def test_single_record(self):
        records = [ev.RatingRecord("q0", "ours", 3, 4, 5)]
        assert ev.aggregate_ratings(records) == {
            "ours": {"similarity": 3.0, "naturalness": 4.0, "informativeness": 5.0}
        }

    def test_mean_of_extremes(self):
        records = [
            ev.RatingRecord("q0", "ours", 1, 1, 1),
            ev.RatingRecord("q1", "ours", 5, 5, 5),
        ]
        means = ev.aggregate_ratings(records)["ours"]
        assert means == {"similarity": 3.0, "naturalness": 3.0, "informativeness": 3.0}

    def test_out_of_range_score(self):
        with pytest.raises(ev.EvalError):
            ev.RatingRecord("q0", "ours", 6, 3, 3)

    def test_empty_records(self):
        with pytest.raises(ev.EvalError):
            ev.aggregate_ratings([])


def test_save_report_round_trip(tmp_path):
    report = ev.metric_report(["the cat sat"], ["the cat sat on the mat"])
    path = tmp_path / "report.json"
    ev.save_report(report, path)
    payload = json.loads(path.read_text())
    assert payload["bleu4"] == pytest.approx(report.bleu4)
    assert payload["n"] == 1
