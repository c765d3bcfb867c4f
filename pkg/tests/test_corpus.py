import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pamine.corpus import (
    AppraisalRecord,
    CorpusError,
    PeerComment,
    corpus_stats,
    load_records,
    save_records,
    sentence_records,
    split_sentences,
    SentenceRecord,
    SUPERVISOR,
)


def _write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")


def _sentence(text, n_words=None):
    if n_words is not None:
        text = " ".join("w" for _ in range(n_words))
    return SentenceRecord("e1", SUPERVISOR, None, text, 0)


class TestLoadRecords:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text("", encoding="utf-8")
        assert load_records(path) == []

    def test_jsonl_with_five_comments(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        _write_jsonl(path, [{
            "employee_id": "E1",
            "supervisor_text": "Good work.",
            "peer_comments": [{"peer_id": f"p{i}", "text": f"comment {i}"}
                              for i in range(5)],
            "manual_summary": None,
        }])
        records = load_records(path)
        assert len(records) == 1
        assert len(records[0].peer_comments) == 5
        assert records[0].peer_comments[2].peer_id == "p2"

    def test_duplicate_employee_id(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        row = {"employee_id": "E1", "supervisor_text": "x", "peer_comments": []}
        _write_jsonl(path, [row, row])
        with pytest.raises(CorpusError, match="E1"):
            load_records(path)

    def test_malformed_line_reports_line_number(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"employee_id": "E1"}\nnot json\n', encoding="utf-8")
        with pytest.raises(CorpusError, match=":2"):
            load_records(path)

    def test_missing_field_is_an_error(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        _write_jsonl(path, [{"supervisor_text": "x"}])
        with pytest.raises(CorpusError, match=":1"):
            load_records(path)

    def test_empty_comment_rejected(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        _write_jsonl(path, [{
            "employee_id": "E1", "supervisor_text": "x",
            "peer_comments": [{"peer_id": "p1", "text": "   "}],
        }])
        with pytest.raises(CorpusError):
            load_records(path)

    def test_csv(self, tmp_path):
        path = tmp_path / "corpus.csv"
        path.write_text(
            "employee_id,supervisor_text,peer_comments,manual_summary\n"
            'E1,Good work.,great guy|team player,short summary\n'
            'E2,Needs focus.,,\n',
            encoding="utf-8",
        )
        records = load_records(path, format="csv")
        assert [r.employee_id for r in records] == ["E1", "E2"]
        assert [c.text for c in records[0].peer_comments] == ["great guy", "team player"]
        assert records[0].manual_summary == "short summary"
        assert records[1].peer_comments == ()
        assert records[1].manual_summary is None

    def test_unknown_format(self, tmp_path):
        with pytest.raises(CorpusError):
            load_records(tmp_path / "x", format="xml")

    def test_roundtrip(self, tmp_path):
        original = [
            AppraisalRecord("E1", "He is great. Really.",
                            (PeerComment("p1", "nice guy"),), "greatness"),
            AppraisalRecord("E2", "", (), None),
        ]
        path = tmp_path / "out.jsonl"
        save_records(original, path)
        assert load_records(path) == original


class TestSplitSentences:
    def test_empty(self):
        assert split_sentences("") == []

    def test_single_sentence_from_examples(self):
        text = "He can drive team to achieve results and can take pressure."
        assert split_sentences(text) == [text]

    def test_no_terminator_still_one_sentence(self):
        text = "Dedication, Technical expertise and always supportive"
        assert split_sentences(text) == [text]

    def test_two_sentences(self):
        assert split_sentences("He delivers. She leads!") == \
            ["He delivers.", "She leads!"]

    def test_question_and_runs(self):
        assert split_sentences("Really?! Yes.") == ["Really?!", "Yes."]

    def test_abbreviation_not_split(self):
        text = "Knows tools e.g. compilers and linkers."
        assert split_sentences(text) == [text]

    def test_no_split_without_following_space(self):
        assert split_sentences("Version 1.5 shipped on time.") == \
            ["Version 1.5 shipped on time."]

    def test_idempotent(self):
        texts = [
            "He delivers. She leads! Why not? Because e.g. reasons exist.",
            "Dedication, Technical expertise and always supportive",
        ]
        for text in texts:
            for sentence in split_sentences(text):
                assert split_sentences(sentence) == [sentence]

    def test_whitespace_trimmed(self):
        for sentence in split_sentences("  He delivers.   She leads.  "):
            assert sentence == sentence.strip()


class TestSentenceRecords:
    def test_sources_and_dense_indices(self):
        rec = AppraisalRecord(
            "E1", "First point. Second point.",
            (PeerComment("p1", "Nice. Helpful."), PeerComment("p2", "Solid")),
        )
        out = sentence_records([rec])
        supervisor = [s for s in out if s.source == SUPERVISOR]
        assert [s.index for s in supervisor] == [0, 1]
        p1 = [s for s in out if s.peer_id == "p1"]
        assert [s.index for s in p1] == [0, 1]
        p2 = [s for s in out if s.peer_id == "p2"]
        assert [(s.index, s.text) for s in p2] == [(0, "Solid")]


class TestCorpusStats:
    def test_single_sentence(self):
        stats = corpus_stats([_sentence("", n_words=4)])
        assert (stats.min, stats.max, stats.q1, stats.q2, stats.q3) == (4, 4, 4, 4, 4)
        assert stats.mean == 4.0
        assert stats.stdev == 0.0

    def test_hand_computed_five_lengths(self):
        sentences = [_sentence("", n_words=n) for n in (4, 9, 14, 19, 217)]
        stats = corpus_stats(sentences)
        assert stats.sentence_count == 5
        assert stats.min == 4
        assert stats.max == 217
        # nearest-rank (inclusive): ranks ceil(5q) of the sorted lengths
        assert stats.q1 == 9
        assert stats.q2 == 14
        assert stats.q3 == 19
        assert stats.mean == pytest.approx(52.6)
        # population variance computed by hand:
        # (48.6^2 + 43.6^2 + 38.6^2 + 33.6^2 + 164.4^2) / 5 = 6781.84
        assert stats.stdev == pytest.approx(math.sqrt(6781.84))

    def test_constant_lengths(self):
        stats = corpus_stats([_sentence("", n_words=10) for _ in range(3)])
        assert stats.mean == 10.0
        assert stats.stdev == 0.0

    def test_empty_corpus(self):
        with pytest.raises(CorpusError):
            corpus_stats([])

    @given(st.lists(st.integers(min_value=1, max_value=300), min_size=1, max_size=50))
    def test_quartile_monotonicity(self, lengths):
        stats = corpus_stats([_sentence("", n_words=n) for n in lengths])
        assert stats.min <= stats.q1 <= stats.q2 <= stats.q3 <= stats.max
        assert stats.min <= stats.mean <= stats.max
        assert stats.stdev >= 0.0
