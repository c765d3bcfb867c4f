from fractions import Fraction

import numpy as np
import pytest

from pamine.attributes import (
    Attribute,
    ClassCounts,
    MetricError,
    OvrModel,
    attribute_histogram,
    default_attribute_matcher,
    multilabel_prf,
    predict_attributes,
    train_ovr,
)
from pamine.classify import SentenceClass
from pamine.nlp import TaggedSentence, Token, tag_text

A = Attribute
S = SentenceClass


def _sent(tokens):
    toks = tuple(Token(t, t.lower(), "NN") for t in tokens)
    return TaggedSentence(tokens=toks, text=" ".join(tokens))


class TestMultilabelPrf:
    def test_half_overlap(self):
        scores = multilabel_prf([({A.FUNCTIONAL_EXCELLENCE, A.CUSTOMER_FOCUS},
                                  {A.CUSTOMER_FOCUS, A.BUSINESS_ACUMEN})])
        assert scores == (0.5, 0.5, 0.5)

    def test_identical_sets(self):
        pairs = [({A.CUSTOMER_FOCUS}, {A.CUSTOMER_FOCUS}),
                 ({A.BUSINESS_ACUMEN, A.TAKING_OWNERSHIP},
                  {A.BUSINESS_ACUMEN, A.TAKING_OWNERSHIP})]
        assert multilabel_prf(pairs) == (1.0, 1.0, 1.0)

    def test_undefined_skip_rule(self):
        pairs = [(set(), {A.CUSTOMER_FOCUS}),
                 ({A.CUSTOMER_FOCUS}, {A.CUSTOMER_FOCUS})]
        p, r, f = multilabel_prf(pairs)
        assert p == 1.0
        assert r == 0.5
        assert f == pytest.approx(2 * 1.0 * 0.5 / 1.5)

    def test_empty_predicted_contributes_recall_only(self):
        pairs = [(set(), {A.CUSTOMER_FOCUS}), ({A.CUSTOMER_FOCUS}, {A.CUSTOMER_FOCUS})]
        p, _, _ = multilabel_prf(pairs)
        assert p == 1.0  # the empty-P instance did not drag precision down

    def test_empty_actual_contributes_precision_only(self):
        pairs = [({A.CUSTOMER_FOCUS}, set()), ({A.CUSTOMER_FOCUS}, {A.CUSTOMER_FOCUS})]
        _, r, _ = multilabel_prf(pairs)
        assert r == 1.0

    def test_all_precisions_undefined(self):
        with pytest.raises(MetricError):
            multilabel_prf([(set(), {A.CUSTOMER_FOCUS})])

    def test_all_recalls_undefined(self):
        with pytest.raises(MetricError):
            multilabel_prf([({A.CUSTOMER_FOCUS}, set())])

    def test_f_identity_and_bounds(self):
        pairs = [({A.CUSTOMER_FOCUS}, {A.BUSINESS_ACUMEN}),
                 ({A.CUSTOMER_FOCUS, A.BUSINESS_ACUMEN}, {A.CUSTOMER_FOCUS}),
                 (set(), set()),
                 ({A.TAKING_OWNERSHIP}, {A.TAKING_OWNERSHIP})]
        p, r, f = multilabel_prf(pairs)
        assert 0.0 <= p <= 1.0 and 0.0 <= r <= 1.0 and 0.0 <= f <= 1.0
        assert f == (2 * p * r / (p + r) if p + r else 0.0)

    def test_exact_fraction_oracle(self):
        pairs = [
            ({A.FUNCTIONAL_EXCELLENCE}, {A.FUNCTIONAL_EXCELLENCE}),
            ({A.FUNCTIONAL_EXCELLENCE, A.BUILDING_EFFECTIVE_TEAMS},
             {A.BUILDING_EFFECTIVE_TEAMS, A.CUSTOMER_FOCUS}),
            (set(), {A.INTERPERSONAL_EFFECTIVENESS}),
            ({A.INNOVATION_MANAGEMENT}, set()),
        ]
        p, r, f = multilabel_prf(pairs)
        exp_p = Fraction(1, 1) + Fraction(1, 2) + Fraction(0, 1)
        exp_p /= 3
        exp_r = Fraction(1, 1) + Fraction(1, 2) + Fraction(0, 1)
        exp_r /= 3
        assert p == pytest.approx(float(exp_p), abs=1e-15)
        assert r == pytest.approx(float(exp_r), abs=1e-15)
        exp_f = 2 * exp_p * exp_r / (exp_p + exp_r)
        assert f == pytest.approx(float(exp_f), abs=1e-15)


class TestOvrModel:
    def _toy_dataset(self):
        data = []
        for _ in range(5):
            data.append((_sent(["customer", "meetings"]), {A.CUSTOMER_FOCUS}))
            data.append((_sent(["team", "events"]), {A.BUILDING_EFFECTIVE_TEAMS}))
            data.append((_sent(["customer", "team"]),
                         {A.CUSTOMER_FOCUS, A.BUILDING_EFFECTIVE_TEAMS}))
            data.append((_sent(["nothing", "special"]), set()))
        return data

    def test_cue_word_gets_positive_weight(self):
        model = train_ovr(self._toy_dataset())
        idx = model.vocabulary["customer"]
        assert model.weights[A.CUSTOMER_FOCUS.value, idx] > 0

    def test_training_set_predictions_match(self):
        data = self._toy_dataset()
        model = train_ovr(data)
        for sentence, labels in data:
            assert predict_attributes(model, sentence) == labels

    def test_zero_positive_attribute_is_untrainable(self):
        model = train_ovr(self._toy_dataset())
        assert model.trainable[A.CUSTOMER_FOCUS.value]
        assert not model.trainable[A.STRATEGIC_CAPABILITY.value]
        sentence = _sent(["customer", "strategy", "roadmap"])
        assert A.STRATEGIC_CAPABILITY not in predict_attributes(model, sentence)

    def test_empty_dataset_rejected(self):
        with pytest.raises(ValueError):
            train_ovr([])

    def test_empty_sentence_prediction_from_intercepts(self):
        model = train_ovr(self._toy_dataset())
        empty = TaggedSentence(tokens=(), text="")
        # negatives dominate each label, so intercept-only scores stay low
        assert predict_attributes(model, empty) == set()

    def test_threshold_monotonicity(self):
        data = self._toy_dataset()
        model = train_ovr(data, threshold=0.5)
        stricter = OvrModel(
            vocabulary=model.vocabulary, weights=model.weights,
            intercepts=model.intercepts,
            thresholds=np.full(len(Attribute), 0.9),
            trainable=model.trainable,
        )
        for sentence, _ in data:
            assert predict_attributes(stricter, sentence) <= \
                predict_attributes(model, sentence)

    def test_paper_strength_sentence_maps_to_two_attributes(self):
        cues = {
            A.FUNCTIONAL_EXCELLENCE: ["technology", "coding", "delivery"],
            A.BUILDING_EFFECTIVE_TEAMS: ["team", "teams", "teamwork"],
            A.CUSTOMER_FOCUS: ["customer", "client"],
        }
        data = []
        for attr, words in cues.items():
            for w in words:
                for filler in (["good"], ["shows"], ["keeps"]):
                    data.append((_sent(filler + [w]), {attr}))
        for filler in (["good", "person"], ["plain", "report"], ["met", "him"]):
            data.append((_sent(filler), set()))
        model = train_ovr(data)
        sentence = tag_text(
            "Excellent technology leadership and delivery capabilities along "
            "with ability to groom technology champions within the team.")
        assert predict_attributes(model, sentence) == \
            {A.FUNCTIONAL_EXCELLENCE, A.BUILDING_EFFECTIVE_TEAMS}

    def test_serialization_roundtrip(self):
        data = self._toy_dataset()
        model = train_ovr(data)
        restored = OvrModel.from_json(model.to_json())
        for sentence, _ in data:
            assert predict_attributes(model, sentence) == \
                predict_attributes(restored, sentence)


class TestAttributeMatcher:
    def test_paper_strength_sentence(self):
        matcher = default_attribute_matcher()
        sentence = tag_text(
            "Excellent technology leadership and delivery capabilities along "
            "with ability to groom technology champions within the team.")
        matched = matcher.match(sentence)
        assert {A.FUNCTIONAL_EXCELLENCE, A.BUILDING_EFFECTIVE_TEAMS} == matched

    def test_no_cue_no_attribute(self):
        matcher = default_attribute_matcher()
        assert matcher.match(tag_text("He is around.")) == set()


class TestAttributeHistogram:
    def test_empty(self):
        table = attribute_histogram([])
        assert all(c == ClassCounts(0, 0, 0) for c in table.values())
        assert len(table) == 15

    def test_one_strength_with_two_attributes(self):
        table = attribute_histogram([
            (S.STRENGTH, {A.FUNCTIONAL_EXCELLENCE, A.BUILDING_EFFECTIVE_TEAMS}),
        ])
        assert table[A.FUNCTIONAL_EXCELLENCE].strengths == 1
        assert table[A.BUILDING_EFFECTIVE_TEAMS].strengths == 1
        assert sum(c.strengths for c in table.values()) == 2
        assert sum(c.weaknesses for c in table.values()) == 0

    def test_hand_tally(self):
        pairs = [
            (S.STRENGTH, {A.CUSTOMER_FOCUS}),
            (S.STRENGTH, {A.CUSTOMER_FOCUS, A.BUSINESS_ACUMEN}),
            (S.WEAKNESS, {A.CUSTOMER_FOCUS}),
            (S.SUGGESTION, {A.BUSINESS_ACUMEN}),
            (S.SUGGESTION, set()),
            (S.OTHER, {A.CUSTOMER_FOCUS}),  # OTHER sentences are not counted
        ]
        table = attribute_histogram(pairs)
        assert table[A.CUSTOMER_FOCUS] == ClassCounts(2, 1, 0)
        assert table[A.BUSINESS_ACUMEN] == ClassCounts(1, 0, 1)
        total_assignments = sum(
            c.strengths + c.weaknesses + c.suggestions for c in table.values())
        assert total_assignments == 5
