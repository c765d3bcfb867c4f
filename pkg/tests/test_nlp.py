import pytest
from hypothesis import given
from hypothesis import strategies as st

from pamine.nlp import (
    PhraseSpan,
    TaggedSentence,
    Token,
    chunk_noun_phrases,
    headword,
    lemmatize,
    parse_pretagged,
    pos_tag,
    tag_text,
    tokenize,
)

words = st.text(alphabet="abcdefghij", min_size=1, max_size=8)


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_plain(self):
        assert tokenize("always supportive") == ["always", "supportive"]

    def test_detaches_commas_and_periods(self):
        assert tokenize("Approachable, Knowlegeable") == \
            ["Approachable", ",", "Knowlegeable"]
        assert tokenize("helping nature.") == ["helping", "nature", "."]

    def test_standalone_punct_kept(self):
        assert tokenize("ok ,") == ["ok", ","]

    def test_lossless_modulo_whitespace(self):
        text = "Dedication, Technical expertise and always supportive"
        assert "".join(tokenize(text)) == "".join(text.split())


class TestPosTag:
    def test_lexicon_lookup(self):
        assert pos_tag(["supportive"]).tags == ("JJ",)

    def test_lexicon_and_suffix(self):
        assert pos_tag(["needs", "to", "improve"]).tags == ("VBZ", "TO", "VB")

    def test_noun_phrase_analysis(self):
        assert pos_tag(["excellent", "listener"]).tags == ("JJ", "NN")

    def test_unknown_fallbacks(self):
        assert pos_tag(["zxqv"]).tags == ("NN",)
        assert pos_tag(["Zxqv"]).tags == ("NNP",)
        assert pos_tag(["zxqvly"]).tags == ("RB",)
        assert pos_tag(["zxqving"]).tags == ("VBG",)
        assert pos_tag(["zxqvable"]).tags == ("JJ",)
        assert pos_tag(["12"]).tags == ("CD",)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            pos_tag([])

    @given(st.lists(words, min_size=1, max_size=12))
    def test_output_length_matches_input(self, tokens):
        assert len(pos_tag(tokens).tokens) == len(tokens)

    def test_detokenization_word_equivalent(self):
        sentence = tag_text("Effective communication and team player")
        assert " ".join(sentence.surfaces) == sentence.text


class TestPretagged:
    def test_parse(self):
        sentence = parse_pretagged("excellent_JJ listener_NN")
        assert sentence.surfaces == ("excellent", "listener")
        assert sentence.tags == ("JJ", "NN")

    def test_bad_format(self):
        with pytest.raises(ValueError):
            parse_pretagged("nounderscore")

    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            parse_pretagged("word_XYZ")


def _tagged(pairs):
    tokens = tuple(Token(w, w.lower(), t) for w, t in pairs)
    return TaggedSentence(tokens=tokens, text=" ".join(w for w, _ in pairs))


class TestChunking:
    def test_two_noun_compound(self):
        sentence = _tagged([("customer", "NN"), ("relationship", "NN")])
        spans = chunk_noun_phrases(sentence)
        assert [(s.start, s.end) for s in spans] == [(0, 2)]

    def test_all_verbs(self):
        sentence = _tagged([("go", "VB"), ("run", "VB")])
        assert chunk_noun_phrases(sentence) == []

    def test_maximal_three_noun_compound(self):
        sentence = _tagged([("maintains", "VBZ"), ("work", "NN"),
                            ("life", "NN"), ("balance", "NN")])
        spans = chunk_noun_phrases(sentence)
        assert [(s.start, s.end) for s in spans] == [(1, 4)]

    def test_determiner_and_adjective_joined(self):
        sentence = _tagged([("the", "DT"), ("vast", "JJ"), ("knowledge", "NN")])
        spans = chunk_noun_phrases(sentence)
        assert [(s.start, s.end) for s in spans] == [(0, 3)]

    def test_trailing_adjective_excluded(self):
        # the NP must end with a noun
        sentence = _tagged([("team", "NN"), ("happy", "JJ")])
        spans = chunk_noun_phrases(sentence)
        assert [(s.start, s.end) for s in spans] == [(0, 1)]

    @given(st.lists(st.sampled_from(["NN", "NNS", "JJ", "DT", "VB", "IN", "RB"]),
                    min_size=1, max_size=15))
    def test_no_overlap_and_covered_tags(self, tags):
        sentence = _tagged([(f"w{i}", t) for i, t in enumerate(tags)])
        spans = chunk_noun_phrases(sentence)
        seen = set()
        for span in spans:
            for i in range(span.start, span.end):
                assert i not in seen
                seen.add(i)
                assert tags[i].startswith(("NN", "JJ", "DT"))
            # each span ends with a noun
            assert tags[span.end - 1].startswith("NN")


class TestHeadword:
    def test_rightmost_noun(self):
        sentence = _tagged([("excellent", "JJ"), ("listener", "NN")])
        assert headword(PhraseSpan(0, 2), sentence).surface == "listener"

    def test_single_adjective_falls_back(self):
        sentence = _tagged([("supportive", "JJ")])
        assert headword(PhraseSpan(0, 1), sentence).surface == "supportive"

    def test_headword_equality_across_misspelling(self):
        a = _tagged([("vast", "JJ"), ("knowledge", "NN")])
        b = _tagged([("wast", "NN"), ("knowledge", "NN")])
        ha = lemmatize(headword(PhraseSpan(0, 2), a).lower)
        hb = lemmatize(headword(PhraseSpan(0, 2), b).lower)
        assert ha == hb == "knowledge"

    def test_headword_inside_span(self):
        sentence = _tagged([("the", "DT"), ("team", "NN"), ("player", "NN")])
        token = headword(PhraseSpan(1, 3), sentence)
        assert token.surface in ("team", "player")
        assert token.surface == "player"

    def test_span_validation(self):
        with pytest.raises(ValueError):
            PhraseSpan(2, 2)
        with pytest.raises(ValueError):
            headword(PhraseSpan(0, 5), _tagged([("a", "DT")]))


class TestLemmatize:
    @pytest.mark.parametrize("word,lemma", [
        ("technologies", "technology"),
        ("capabilities", "capability"),
        ("skills", "skill"),
        ("years", "year"),
        ("business", "business"),
        ("class", "class"),
        ("his", "his"),
        ("knowledge", "knowledge"),
        ("Results", "result"),
    ])
    def test_cases(self, word, lemma):
        assert lemmatize(word) == lemma
